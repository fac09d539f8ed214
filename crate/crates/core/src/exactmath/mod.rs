//! Exact arithmetic: number theory on integers, rational polynomials,
//! and cyclotomic polynomials.

pub mod arith;
pub mod cyclotomic;
pub mod poly;

/// Exact rational number in lowest terms.
pub type Rat = num_rational::BigRational;

pub use arith::{
    binomial, divisors, euler_phi, gcd, is_prime, mobius, totient_at_most, Factorization,
};
pub use cyclotomic::{
    cyclotomic, cyclotomic_divides, reduce_mod_cyclotomic, vanishes_at_primitive_root,
};
pub use poly::{Poly, Sign};

/// Shorthand for an integer-valued [`Rat`].
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

/// Shorthand for `n / d`.
pub fn frac(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}
