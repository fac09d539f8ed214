//! Scanning a polynomial for cyclotomic divisors.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::necklace_s;
use crate::error::{Error, Result};
use crate::exactmath::{cyclotomic_divides, divisors, euler_phi, totient_at_most, Poly};

/// Cyclotomic divisors of a polynomial, each counted once.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycloFactorReport {
    /// Set when the scanned polynomial is `S_d`.
    pub d: Option<u64>,
    /// Every `m` with `Phi_m | f`, ascending.
    pub factor_ms: Vec<u64>,
    /// Every `m` with `x^m - 1 | f`.
    pub xm_minus: Vec<u64>,
    /// Every `m` with `x^m + 1 | f`.
    pub xm_plus: Vec<u64>,
    /// `deg f - sum phi(m) - [x | f]`; a power of `x` is counted once.
    pub cofactor_degree: i64,
    pub has_x_factor: bool,
}

/// Finds all `m` with `Phi_m | f`.
///
/// Only `m` with `phi(m) <= deg f` can occur; they are enumerated exactly.
pub fn cyclotomic_factors(f: &Poly) -> Result<CycloFactorReport> {
    let deg = f.degree().ok_or(Error::ZeroPolynomial)?;
    let candidates = totient_at_most(deg);
    let hits: Vec<u64> = candidates
        .par_iter()
        .map(|&m| cyclotomic_divides(f, m).map(|hit| hit.then_some(m)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let set: BTreeSet<u64> = hits.iter().copied().collect();

    let xm_minus: Vec<u64> = hits
        .iter()
        .copied()
        .filter(|&m| divisors(m).unwrap().iter().all(|n| set.contains(n)))
        .collect();
    let max = hits.last().copied().unwrap_or(0);
    let xm_plus: Vec<u64> = (1..=max / 2)
        .filter(|&m| {
            divisors(2 * m)
                .unwrap()
                .iter()
                .filter(|&&n| m % n != 0)
                .all(|n| set.contains(n))
        })
        .collect();
    let has_x_factor = f.low_degree() != Some(0);
    let phi_sum: u64 = hits.iter().map(|&m| euler_phi(m).unwrap()).sum();
    Ok(CycloFactorReport {
        d: None,
        factor_ms: hits,
        xm_minus,
        xm_plus,
        cofactor_degree: deg as i64 - phi_sum as i64 - has_x_factor as i64,
        has_x_factor,
    })
}

/// [`cyclotomic_factors`] of `S_d(x)` (equivalently of `M_d(x)`).
pub fn necklace_factors(d: u64) -> Result<CycloFactorReport> {
    let mut report = cyclotomic_factors(&necklace_s(d)?)?;
    report.d = Some(d);
    Ok(report)
}
