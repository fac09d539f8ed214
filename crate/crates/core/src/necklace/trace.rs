//! Traces of `M_d(zeta_m)` from `Q(zeta_m)` down to `Q`.

use num_bigint::BigInt;
use num_traits::One;

use super::necklace_s;
use crate::error::{Error, Result};
use crate::exactmath::{cyclotomic, euler_phi, gcd, mobius, Poly, Rat, Sign};

/// `Tr(M_d(zeta_m))`, computed by summing the Galois conjugates
/// `zeta_m -> zeta_m^a` of `S_d(zeta_m)` in `Q[x]/Phi_m` and dividing by `d`.
pub fn trace_m_at_zeta(d: u64, m: u64) -> Result<Rat> {
    let phi_m = cyclotomic(m)?;
    let residue = necklace_s(d)?
        .reduce_mod_xm(m, Sign::Minus)
        .divrem(&phi_m)?
        .1;
    let mut total = Poly::zero();
    for a in (1..=m).filter(|&a| gcd(a, m) == 1) {
        total += &residue.substitute_power(a).reduce_mod_xm(m, Sign::Minus);
    }
    let total = total.divrem(&phi_m)?.1;
    if !total.is_constant() {
        return Err(Error::HypothesisNotMet(format!(
            "conjugate sum is not rational: {total}"
        )));
    }
    Ok(total.coeff(0) * Rat::new(BigInt::one(), d.into()))
}

/// Ramanujan's sum `c_m(k) = sum over units a mod m of zeta_m^(a k)`.
pub fn ramanujan_sum(m: u64, k: u64) -> Result<i64> {
    let g = gcd(k, m);
    let q = m / g;
    Ok(mobius(q)? as i64 * (euler_phi(m)? / euler_phi(q)?) as i64)
}
