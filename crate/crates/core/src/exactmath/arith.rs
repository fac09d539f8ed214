//! Elementary number theory on machine integers.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};

/// Prime factorization of a positive integer.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Factorization {
    n: u64,
    // ascending primes
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    /// Factors `n` by trial division. Rejects `n = 0`.
    pub fn of(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::NonPositive { what: "n" });
        }
        let mut factors = Vec::new();
        let mut rest = n;
        let mut p = 2u64;
        while p.saturating_mul(p) <= rest {
            if rest % p == 0 {
                let mut e = 0;
                while rest % p == 0 {
                    rest /= p;
                    e += 1;
                }
                factors.push((p, e));
            }
            p += if p == 2 { 1 } else { 2 };
        }
        if rest > 1 {
            factors.push((rest, 1));
        }
        Ok(Factorization { n, factors })
    }

    pub fn value(&self) -> u64 {
        self.n
    }

    /// `(prime, exponent)` pairs in ascending prime order.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn as_map(&self) -> BTreeMap<u64, u32> {
        self.factors.iter().copied().collect()
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// Number of distinct prime factors.
    pub fn omega(&self) -> usize {
        self.factors.len()
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    /// Product of the distinct primes dividing `n`.
    pub fn radical(&self) -> u64 {
        self.primes().product()
    }

    pub fn mobius(&self) -> i32 {
        if !self.is_squarefree() {
            0
        } else if self.factors.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn euler_phi(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(p, e)| p.pow(e - 1) * (p - 1))
            .product()
    }

    /// All positive divisors, ascending.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, e) in &self.factors {
            let len = divs.len();
            let mut pk = 1;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }
}

pub fn mobius(n: u64) -> Result<i32> {
    Ok(Factorization::of(n)?.mobius())
}

pub fn euler_phi(n: u64) -> Result<u64> {
    Ok(Factorization::of(n)?.euler_phi())
}

pub fn divisors(n: u64) -> Result<Vec<u64>> {
    Ok(Factorization::of(n)?.divisors())
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut p = 3;
    while p * p <= n {
        if n % p == 0 {
            return false;
        }
        p += 2;
    }
    true
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Exact binomial coefficient.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Binomial coefficient as `u64`, or `None` on overflow.
pub fn binomial_u64(n: u64, k: u64) -> Option<u64> {
    binomial(n, k).to_u64()
}

/// All `m >= 1` with `phi(m) <= bound`, ascending.
///
/// Enumerates prime-power products directly, so the result is complete
/// even though such `m` can be much larger than `bound`.
pub fn totient_at_most(bound: u64) -> Vec<u64> {
    if bound == 0 {
        return Vec::new();
    }
    // every prime p with p - 1 <= bound can appear
    let primes: Vec<u64> = (2..=bound + 1).filter(|&p| is_prime(p)).collect();
    let mut out = Vec::new();
    fn walk(primes: &[u64], start: usize, m: u64, phi: u64, bound: u64, out: &mut Vec<u64>) {
        out.push(m);
        for (i, &p) in primes.iter().enumerate().skip(start) {
            let mut phi_next = phi * (p - 1);
            if phi_next > bound {
                // primes ascending: later ones are larger
                break;
            }
            let mut m_next = m * p;
            loop {
                walk(primes, i + 1, m_next, phi_next, bound, out);
                phi_next *= p;
                if phi_next > bound {
                    break;
                }
                m_next *= p;
            }
        }
    }
    walk(&primes, 0, 1, 1, bound, &mut out);
    out.sort_unstable();
    out
}

/// Multiplicative order of `a` modulo `m`, if `a` is a unit.
pub fn multiplicative_order(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(1);
    }
    if gcd(a % m, m) != 1 {
        return None;
    }
    let mut x = a % m;
    let mut k = 1;
    while x != 1 {
        x = ((x as u128 * a as u128) % m as u128) as u64;
        k += 1;
    }
    Some(k)
}

/// `a^-1 mod m` for coprime `a`, `m`.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let g = (a as i128).extended_gcd(&(m as i128));
    if g.gcd != 1 {
        return None;
    }
    Some(g.x.rem_euclid(m as i128) as u64)
}

/// Ascending primes below `limit` (sieve of Eratosthenes).
pub fn primes_below(limit: u64) -> Vec<u64> {
    let limit = limit as usize;
    if limit < 3 {
        return Vec::new();
    }
    let mut composite = vec![false; limit];
    let mut out = Vec::new();
    for i in 2..limit {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j < limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mobius_examples() {
        assert_eq!(mobius(1).unwrap(), 1);
        assert_eq!(mobius(6).unwrap(), 1);
        assert_eq!(mobius(12).unwrap(), 0);
        assert_eq!(mobius(30).unwrap(), -1);
        assert!(mobius(0).is_err());
    }

    #[test]
    fn phi_examples() {
        assert_eq!(euler_phi(1).unwrap(), 1);
        assert_eq!(euler_phi(10).unwrap(), 4);
        assert_eq!(euler_phi(105).unwrap(), 48);
        assert_eq!(euler_phi(6061).unwrap(), 5040);
        assert!(euler_phi(0).is_err());
    }

    #[test]
    fn phi_matches_unit_count() {
        for n in 1..300u64 {
            let units = (1..=n).filter(|&a| gcd(a, n) == 1).count() as u64;
            assert_eq!(euler_phi(n).unwrap(), units, "n = {n}");
        }
    }

    #[test]
    fn phi_as_mobius_sum() {
        for n in 1..500u64 {
            let f = Factorization::of(n).unwrap();
            let s: i64 = f
                .divisors()
                .iter()
                .map(|&e| mobius(e).unwrap() as i64 * (n / e) as i64)
                .sum();
            assert_eq!(s, f.euler_phi() as i64);
        }
    }

    #[test]
    fn totient_enumeration_is_complete() {
        let bound = 40;
        let fast = totient_at_most(bound);
        // phi(m) >= sqrt(m/2), so m <= 2 * bound^2 covers everything
        let slow: Vec<u64> = (1..=2 * bound * bound)
            .filter(|&m| euler_phi(m).unwrap() <= bound)
            .collect();
        assert_eq!(fast, slow);
    }

    #[test]
    fn divisors_and_radical() {
        let f = Factorization::of(360).unwrap();
        assert_eq!(f.divisors().len(), 24);
        assert_eq!(f.radical(), 30);
        assert_eq!(f.omega(), 3);
    }

    #[test]
    fn order_and_inverse() {
        assert_eq!(multiplicative_order(14, 15), Some(2));
        assert_eq!(multiplicative_order(2, 7), Some(3));
        assert_eq!(multiplicative_order(5, 15), None);
        assert_eq!(mod_inverse(3, 10), Some(7));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(10, 3), BigUint::from(120u32));
        assert_eq!(binomial(3, 5), BigUint::from(0u32));
        assert_eq!(binomial_u64(14, 2), Some(91));
    }
}
