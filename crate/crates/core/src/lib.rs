//! Necklace polynomials, their cyclotomic factors, and the surrounding
//! algebra: Frobenius operators, necklace systems, subgroup lattices,
//! combinatorial Euler products and higher necklace polynomials.
//!
//! Everything is exact. Polynomials carry rational coefficients
//! ([`exactmath::Poly`]) and no floating point appears anywhere.
//!
//! ```
//! use necklace_core::necklace::necklace_s;
//!
//! let s = necklace_s(10).unwrap();
//! assert_eq!(s.to_string(), "x^10 - x^5 - x^2 + x");
//! ```

pub mod error;
pub mod eulerprod;
pub mod exactmath;
pub mod frobenius;
pub mod groups;
pub mod higher;
pub mod json;
pub mod necklace;
pub mod systems;

#[cfg(doctest)]
mod book;

pub use error::{Error, Result};
