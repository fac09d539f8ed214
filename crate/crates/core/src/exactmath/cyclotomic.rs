//! Cyclotomic polynomials and exact divisibility by them.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::arith::Factorization;
use super::poly::{Poly, Sign};
use super::Rat;
use crate::error::{Error, Result};

fn cache() -> &'static Mutex<HashMap<u64, Arc<Poly>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Poly>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// The `m`-th cyclotomic polynomial. Results are memoized per process.
pub fn cyclotomic(m: u64) -> Result<Arc<Poly>> {
    if m == 0 {
        return Err(Error::NonPositive { what: "m" });
    }
    if let Some(p) = cache().lock().expect("cache poisoned").get(&m) {
        return Ok(Arc::clone(p));
    }
    // Computed outside the lock; a racing fill inserts an identical value.
    let p = Arc::new(compute_cyclotomic(m));
    let mut guard = cache().lock().expect("cache poisoned");
    Ok(Arc::clone(guard.entry(m).or_insert(p)))
}

fn compute_cyclotomic(m: u64) -> Poly {
    let f = Factorization::of(m).expect("m >= 1");
    let r = f.radical();
    if r == 1 {
        return Poly::from_coeffs(&[-1, 1]);
    }
    // Phi_m(x) = Phi_r(x^(m/r)), and for r > 1
    // Phi_r(x) = prod_{n | r} (1 - x^(r/n))^mu(n), exact as a series up to deg phi(r).
    let rf = Factorization::of(r).expect("r >= 1");
    let deg = rf.euler_phi() as usize;
    let mut c = vec![BigInt::zero(); deg + 1];
    c[0] = BigInt::one();
    let divisors = rf.divisors();
    // numerator factors first keeps the intermediate values small
    for &n in &divisors {
        if Factorization::of(n).unwrap().mobius() == 1 {
            let k = (r / n) as usize;
            for i in (k..=deg).rev() {
                let t = c[i - k].clone();
                c[i] -= t;
            }
        }
    }
    for &n in &divisors {
        if Factorization::of(n).unwrap().mobius() == -1 {
            let k = (r / n) as usize;
            for i in k..=deg {
                let t = c[i - k].clone();
                c[i] += t;
            }
        }
    }
    let stretch = m / r;
    Poly::from_terms(
        c.into_iter()
            .enumerate()
            .map(|(i, v)| (i as u64 * stretch, Rat::from_integer(v))),
    )
}

/// Whether `sum c_k zeta^k = 0` for a primitive `m`-th root of unity `zeta`.
///
/// Exact and independent of `Phi_m`: the sum is split along the tower
/// `Q(zeta_m) / Q(zeta_rad(m))` and then prime by prime using the power basis
/// `1, zeta_p, ..., zeta_p^(p-2)`.
pub fn vanishes_at_primitive_root(terms: &[(u64, BigInt)], m: u64) -> bool {
    assert!(m >= 1, "modulus must be positive");
    let f = Factorization::of(m).expect("m >= 1");
    let r = f.radical();
    let s = m / r;
    let primes: Vec<u64> = f.primes().collect();
    let mut buckets: BTreeMap<u64, HashMap<u64, BigInt>> = BTreeMap::new();
    for (k, c) in terms {
        let k = k % m;
        *buckets
            .entry(k % s)
            .or_default()
            .entry((k / s) % r)
            .or_insert_with(BigInt::zero) += c;
    }
    buckets.into_values().all(|b| {
        let v: Vec<(u64, BigInt)> = b.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        vanishes_squarefree(&v, &primes)
    })
}

// `terms` have exponents reduced mod the product of `primes`.
fn vanishes_squarefree(terms: &[(u64, BigInt)], primes: &[u64]) -> bool {
    if terms.is_empty() {
        return true;
    }
    let Some((&p, rest)) = primes.split_first() else {
        return terms.iter().map(|(_, c)| c).sum::<BigInt>().is_zero();
    };
    let r_rest: u64 = rest.iter().product();
    let mut b: Vec<HashMap<u64, BigInt>> = vec![HashMap::new(); p as usize];
    for (k, c) in terms {
        *b[(k % p) as usize]
            .entry(k % r_rest)
            .or_insert_with(BigInt::zero) += c;
    }
    let last = b.pop().expect("p >= 2");
    b.into_iter().all(|mut bi| {
        for (e, c) in &last {
            *bi.entry(*e).or_insert_with(BigInt::zero) -= c;
        }
        let v: Vec<(u64, BigInt)> = bi.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        vanishes_squarefree(&v, rest)
    })
}

/// `f mod Phi_m`, computed by folding modulo `x^m - 1` first.
pub fn reduce_mod_cyclotomic(f: &Poly, m: u64) -> Result<Poly> {
    let phi = cyclotomic(m)?;
    Ok(f.reduce_mod_xm(m, Sign::Minus).divrem(&phi)?.1)
}

/// Whether `Phi_m` divides `f`.
///
/// The root-of-unity test screens candidates; a positive answer is then
/// confirmed by exact division.
pub fn cyclotomic_divides(f: &Poly, m: u64) -> Result<bool> {
    if m == 0 {
        return Err(Error::NonPositive { what: "m" });
    }
    let folded = f.reduce_mod_xm(m, Sign::Minus);
    if !vanishes_at_primitive_root(&folded.clear_denominators(), m) {
        return Ok(false);
    }
    let phi = cyclotomic(m)?;
    let confirmed = folded.divrem(&phi)?.1.is_zero();
    debug_assert!(confirmed, "root test and division disagree at m = {m}");
    Ok(confirmed)
}

/// Same answer as [`cyclotomic_divides`] by plain long division.
pub fn cyclotomic_divides_by_division(f: &Poly, m: u64) -> Result<bool> {
    let phi = cyclotomic(m)?;
    Ok(f.divrem(&phi)?.1.is_zero())
}
