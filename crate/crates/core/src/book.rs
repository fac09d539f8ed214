//! Guide chapters compiled as doctests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub struct Introduction;

#[doc = include_str!("../../../book/src/necklace.md")]
pub struct Necklace;

#[doc = include_str!("../../../book/src/cyclotomic.md")]
pub struct Cyclotomic;

#[doc = include_str!("../../../book/src/frobenius.md")]
pub struct Frobenius;

#[doc = include_str!("../../../book/src/systems.md")]
pub struct Systems;

#[doc = include_str!("../../../book/src/groups.md")]
pub struct Groups;

#[doc = include_str!("../../../book/src/eulerprod.md")]
pub struct EulerProducts;

#[doc = include_str!("../../../book/src/higher.md")]
pub struct Higher;

#[doc = include_str!("../../../book/src/cli.md")]
pub struct CommandLine;
