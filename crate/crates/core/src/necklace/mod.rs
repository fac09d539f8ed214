//! Classic necklace polynomials `M_d(x) = S_d(x) / d` with
//! `S_d(x) = sum_{e | d} mu(e) x^(d/e)`, and checks of their divisibility
//! and congruence properties.

pub mod conjecture;
pub mod factors;
pub mod trace;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactmath::{cyclotomic, is_prime, rat, Factorization, Poly, Rat, Sign};
use crate::frobenius::phi_op;

pub use conjecture::{
    verify_conjecture, verify_conjecture_with, Checkpoint, ConjectureRun, Counterexample,
    ShardRecord,
};
pub use factors::{cyclotomic_factors, necklace_factors, CycloFactorReport};
pub use trace::{ramanujan_sum, trace_m_at_zeta};

/// `S_d(x) = d M_d(x)`, which has integer coefficients.
pub fn necklace_s(d: u64) -> Result<Poly> {
    let f = Factorization::of(d)?;
    Ok(Poly::from_int_terms(f.divisors().into_iter().map(|e| {
        (d / e, Factorization::of(e).unwrap().mobius() as i64)
    })))
}

/// `M_d(x)`, the number of aperiodic necklaces of length `d` in `x` colors.
pub fn necklace_m(d: u64) -> Result<Poly> {
    Ok(necklace_s(d)?.scale(&Rat::new(BigInt::one(), d.into())))
}

/// `(c, e)` with `c` the squarefree part of `d` and `S_d(x) = S_c(x^e)`.
pub fn squarefree_reduction(d: u64) -> Result<(u64, u64)> {
    let c = Factorization::of(d)?.radical();
    Ok((c, d / c))
}

/// Whether `x^m - 1` (`Minus`) or `x^m + 1` (`Plus`) divides `S_d(x)`.
///
/// Decided in the quotient of the Frobenius algebra; the polynomial
/// remainder is computed as well and must agree.
pub fn divides_xm(d: u64, m: u64, sign: Sign) -> Result<bool> {
    if m == 0 {
        return Err(Error::NonPositive { what: "m" });
    }
    let op = phi_op(d)?;
    // phi[d] is applied to x, which is odd, so the signed quotient is valid here
    let via_operator = match sign {
        Sign::Minus => op.reduce(m).is_zero(),
        Sign::Plus => op.reduce_signed(m).is_zero(),
    };
    let via_poly = necklace_s(d)?.reduce_mod_xm(m, sign).is_zero();
    assert_eq!(
        via_operator, via_poly,
        "operator and polynomial routes disagree"
    );
    Ok(via_operator)
}

/// `(M_d(1), M_d(-1))`.
pub fn eval_pm_one(d: u64) -> Result<(Rat, Rat)> {
    let m = necklace_m(d)?;
    Ok((m.eval(&rat(1)), m.eval(&rat(-1))))
}

/// `M_d'(1)`; equals `phi(d) / d`.
pub fn derivative_at_one(d: u64) -> Result<Rat> {
    Ok(necklace_m(d)?.derivative().eval(&rat(1)))
}

/// Checks `S_{dp}(x) = S_d(x^p) - S_d(x)` when `p` does not divide `d`,
/// and `S_{dp}(x) = S_d(x^p)` when it does.
pub fn functional_check(d: u64, p: u64) -> Result<bool> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let s = necklace_s(d)?;
    let mut rhs = s.substitute_power(p);
    if d % p != 0 {
        rhs -= &s;
    }
    Ok(necklace_s(d * p)? == rhs)
}

/// Whether `l^j` divides every coefficient of `S_d(x) mod x^m - 1`.
pub fn local_factor_check(d: u64, m: u64, l: u64, j: u32) -> Result<bool> {
    if !is_prime(l) {
        return Err(Error::NotPrime(l));
    }
    if m == 0 {
        return Err(Error::NonPositive { what: "m" });
    }
    let modulus = BigInt::from(l).pow(j);
    let reduced = necklace_s(d)?.reduce_mod_xm(m, Sign::Minus);
    Ok(reduced
        .to_int_terms()?
        .iter()
        .all(|(_, c)| (c % &modulus).is_zero()))
}

/// Whether `(x^m - 1)/(x - 1)` divides `Phi_d(x) - 1`.
///
/// Requires `m, d > 1`, `m` not dividing `d`, and `x^m - 1 | M_d(x)`;
/// otherwise [`Error::HypothesisNotMet`].
pub fn phi_minus_one_divisibility(m: u64, d: u64) -> Result<bool> {
    if m <= 1 || d <= 1 {
        return Err(Error::HypothesisNotMet("need m > 1 and d > 1".into()));
    }
    if d % m == 0 {
        return Err(Error::HypothesisNotMet(format!("{m} divides {d}")));
    }
    if !divides_xm(d, m, Sign::Minus)? {
        return Err(Error::HypothesisNotMet(format!(
            "x^{m} - 1 does not divide M_{d}(x)"
        )));
    }
    let target = &*cyclotomic(d)? - &Poly::one();
    let divisor = Poly::xm(m, Sign::Minus).div_exact(&Poly::from_coeffs(&[-1, 1]))?;
    divisor.divides(&target)
}

/// Multiset of `(exponent, prime mod m)` over the factorization of `d`.
fn residue_profile(d: u64, m: u64) -> Result<Vec<(u32, u64)>> {
    let mut v: Vec<(u32, u64)> = Factorization::of(d)?
        .factors()
        .iter()
        .map(|&(p, e)| (e, p % m))
        .collect();
    v.sort_unstable();
    Ok(v)
}

/// Whether the factorizations of `d` and `e` match prime for prime, with
/// equal exponents and primes congruent mod `m`.
pub fn primewise_congruent(d: u64, e: u64, m: u64) -> Result<bool> {
    if m == 0 {
        return Err(Error::NonPositive { what: "m" });
    }
    Ok(residue_profile(d, m)? == residue_profile(e, m)?)
}

/// Whether `S_d - S_e` vanishes modulo `x^m -+ 1`, without any hypothesis.
pub fn difference_vanishes(d: u64, e: u64, m: u64, sign: Sign) -> Result<bool> {
    if m == 0 {
        return Err(Error::NonPositive { what: "m" });
    }
    let diff = &necklace_s(d)? - &necklace_s(e)?;
    Ok(diff.reduce_mod_xm(m, sign).is_zero())
}

/// `S_d = S_e` modulo `x^m - 1` (primewise congruent mod `m`) or modulo
/// `x^m + 1` (primewise congruent mod `2m`).
pub fn primewise_difference_check(d: u64, e: u64, m: u64, sign: Sign) -> Result<bool> {
    let modulus = match sign {
        Sign::Minus => m,
        Sign::Plus => 2 * m,
    };
    if !primewise_congruent(d, e, modulus)? {
        return Err(Error::HypothesisNotMet(format!(
            "{d} and {e} are not primewise congruent mod {modulus}"
        )));
    }
    difference_vanishes(d, e, m, sign)
}
