//! Finite groups given by Cayley tables, their subgroup lattices, and
//! `G`-necklace polynomials.

pub mod chain;
pub mod lattice;
pub mod table;

pub use chain::{
    all_chains, auto_chain, chain_factorize, divisibility_transfer, local_divisibility,
    mobius_via_chain, ChainFactorization, ChainMobius, NormalChain,
};
pub use lattice::{brute_force_subgroups, g_necklace_m, g_necklace_s, SubgroupLattice};
pub use table::{
    abelian, cyclic, dihedral, direct_product, preset, quaternion8, symmetric, CayleyTable,
    FiniteGroup, MAX_ORDER,
};
