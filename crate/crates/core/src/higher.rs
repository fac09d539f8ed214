//! Higher necklace polynomials `M_{d,n}(x)`: the exponents in
//! `sum_d P_{d,n}(x) t^d = prod_j (1 - t^j)^(-M_{j,n}(x))`, where `P_{d,n}`
//! counts monic degree-`d` polynomials in `n` variables.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::eulerprod::{
    euler_invert_by_factors, euler_invert_in, multichoose_in, partitions, CyclotomicField,
    Polynomials, Rationals,
};
use crate::exactmath::{binomial, is_prime, rat, Poly, Rat};

/// Largest `binom(d + n, n)` (the degree of `P_{d,n}` plus one) that
/// polynomial constructions accept by default.
pub const DEFAULT_DEGREE_BUDGET: u64 = 100_000;

/// `binom(d + n, n)` and `binom(d + n - 1, n)`, the exponents in
/// `P_{d,n}(x) = (x^A - x^B)/(x - 1)`.
pub fn p_exponents(d: u64, n: u64) -> (BigUint, BigUint) {
    let upper = binomial(d + n, n);
    let lower = if d == 0 {
        BigUint::zero()
    } else {
        binomial(d + n - 1, n)
    };
    (upper, lower)
}

fn budgeted_upper(d: u64, n: u64, budget: u64) -> Result<(u64, u64)> {
    if n == 0 {
        return Err(Error::NonPositive {
            what: "number of variables n",
        });
    }
    let (upper, lower) = p_exponents(d, n);
    match upper.to_u64() {
        Some(u) if u <= budget => Ok((u, lower.to_u64().expect("lower <= upper"))),
        _ => Err(Error::BudgetExceeded {
            what: "degree of P_{d,n}",
            requested: upper.to_u64().unwrap_or(u64::MAX),
            limit: budget,
        }),
    }
}

/// `P_{d,n}(x) = x^B + x^(B+1) + ... + x^(A-1)`.
pub fn p_dn(d: u64, n: u64) -> Result<Poly> {
    p_dn_with_budget(d, n, DEFAULT_DEGREE_BUDGET)
}

pub fn p_dn_with_budget(d: u64, n: u64, budget: u64) -> Result<Poly> {
    let (upper, lower) = budgeted_upper(d, n, budget)?;
    Ok(Poly::from_terms((lower..upper).map(|k| (k, rat(1)))))
}

/// `M_{1,n} .. M_{d_max,n}` by inverting the series of `P_{d,n}`.
pub fn m_dn(d_max: u64, n: u64) -> Result<Vec<Poly>> {
    m_dn_with_budget(d_max, n, DEFAULT_DEGREE_BUDGET)
}

pub fn m_dn_with_budget(d_max: u64, n: u64, budget: u64) -> Result<Vec<Poly>> {
    budgeted_upper(d_max, n, budget)?;
    let series = (0..=d_max)
        .map(|d| p_dn_with_budget(d, n, budget))
        .collect::<Result<Vec<_>>>()?;
    euler_invert_by_factors(&Polynomials, &series)
}

/// A representation `n = b^{k_1} - b^{k_2} + ... - b^{k_i}` with decreasing
/// exponents, equivalently base-`b` digits all in `{0, b - 1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BalancedExpansion {
    pub n: u64,
    pub base: u64,
    /// Positions `l` with digit `b - 1`, ascending.
    pub full_digits: Vec<u32>,
    /// Nonzero alternating coefficients `b_k`, keyed by `k`.
    pub coeffs: BTreeMap<u32, i64>,
}

impl BalancedExpansion {
    /// `b_k`, zero when absent.
    pub fn coeff(&self, k: u32) -> i64 {
        self.coeffs.get(&k).copied().unwrap_or(0)
    }

    /// `sum b_k base^k` as a check on the alternating form.
    pub fn alternating_value(&self) -> BigInt {
        self.coeffs
            .iter()
            .map(|(&k, &c)| BigInt::from(c) * BigInt::from(self.base).pow(k))
            .sum()
    }

    /// `sum (b - 1) base^l` as a check on the digit form.
    pub fn digit_value(&self) -> BigInt {
        self.full_digits
            .iter()
            .map(|&l| BigInt::from(self.base - 1) * BigInt::from(self.base).pow(l))
            .sum()
    }

    /// Display as `b^k1 - b^k2 + ...`.
    pub fn alternating_string(&self) -> String {
        let mut out = String::new();
        for (i, (&k, &c)) in self.coeffs.iter().rev().enumerate() {
            let term = match k {
                0 => "1".to_string(),
                1 => format!("{}", self.base),
                _ => format!("{}^{k}", self.base),
            };
            match (i, c > 0) {
                (0, true) => out.push_str(&term),
                (0, false) => out.push_str(&format!("-{term}")),
                (_, true) => out.push_str(&format!(" + {term}")),
                (_, false) => out.push_str(&format!(" - {term}")),
            }
        }
        out
    }
}

/// The balanced base-`b` expansion of `n`, if every digit is `0` or `b - 1`.
pub fn balanced_expansion(n: u64, base: u64) -> Option<BalancedExpansion> {
    if n == 0 || base < 2 {
        return None;
    }
    let mut full_digits = Vec::new();
    let (mut rest, mut pos) = (n, 0u32);
    while rest > 0 {
        match rest % base {
            0 => {}
            d if d == base - 1 => full_digits.push(pos),
            _ => return None,
        }
        rest /= base;
        pos += 1;
    }
    // (b - 1) b^l = b^(l+1) - b^l, then collect
    let mut coeffs: BTreeMap<u32, i64> = BTreeMap::new();
    for &l in &full_digits {
        *coeffs.entry(l + 1).or_default() += 1;
        *coeffs.entry(l).or_default() -= 1;
    }
    coeffs.retain(|_, c| *c != 0);
    Some(BalancedExpansion {
        n,
        base,
        full_digits,
        coeffs,
    })
}

/// `M_{d,n}(zeta_p)` from the balanced base-`p` expansion of `n`: `b_k` when
/// `d = p^k`, zero otherwise.
pub fn eval_at_zeta_p(d: u64, n: u64, p: u64) -> Result<Rat> {
    if d == 0 {
        return Err(Error::NonPositive { what: "degree d" });
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let expansion = balanced_expansion(n, p).ok_or_else(|| {
        Error::HypothesisNotMet(format!("{n} has no balanced base {p} expansion"))
    })?;
    Ok(rat(
        prime_power_exponent(d, p).map_or(0, |k| expansion.coeff(k))
    ))
}

fn prime_power_exponent(d: u64, p: u64) -> Option<u32> {
    let mut k = 0;
    let mut x = d;
    while x % p == 0 {
        x /= p;
        k += 1;
    }
    (x == 1).then_some(k)
}

/// `binom(a, b) mod p` from the base-`p` digits of `a` and `b`.
pub fn lucas_binomial_mod(mut a: u64, mut b: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    while b > 0 || a > 0 {
        let (ai, bi) = (a % p, b % p);
        if bi > ai {
            return 0;
        }
        acc = acc * small_binomial_mod(ai, bi, p) % p;
        a /= p;
        b /= p;
    }
    acc
}

fn small_binomial_mod(a: u64, b: u64, p: u64) -> u64 {
    let mut acc = 1u128;
    for i in 0..b {
        acc = acc * (a - i) as u128 % p as u128;
    }
    let mut denom = 1u128;
    for i in 1..=b {
        denom = denom * i as u128 % p as u128;
    }
    // p is prime and denom is a unit mod p
    (acc * mod_pow(denom, p as u128 - 2, p as u128) % p as u128) as u64
}

fn mod_pow(mut base: u128, mut exp: u128, m: u128) -> u128 {
    let mut acc = 1u128 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

/// `binom(a, b) mod m`: Lucas for prime `m`, exact big binomial otherwise.
pub fn binomial_mod(a: u64, b: u64, m: u64) -> u64 {
    if is_prime(m) {
        lucas_binomial_mod(a, b, m)
    } else {
        (binomial(a, b) % BigUint::from(m))
            .to_u64()
            .expect("remainder below m")
    }
}

/// `[k]_zeta = 1 + zeta + ... + zeta^(k-1)` in `Q(zeta_m)`, which only
/// depends on `k mod m` for `m >= 2`.
fn q_integer(field: &CyclotomicField, k_mod_m: u64) -> Poly {
    field.reduce(&Poly::from_terms((0..k_mod_m).map(|e| (e, rat(1)))))
}

/// `P_{d,n}(zeta_m)` in `Q(zeta_m)` for `m >= 2`, from the two binomials
/// reduced mod `m`; `P_{d,n}` itself is never built.
pub fn p_at_zeta(field: &CyclotomicField, d: u64, n: u64) -> Poly {
    let m = field.order();
    let upper = binomial_mod(d + n, n, m);
    let lower = if d == 0 {
        0
    } else {
        binomial_mod(d + n - 1, n, m)
    };
    &q_integer(field, upper) - &q_integer(field, lower)
}

/// `M_{1,n}(zeta_m) .. M_{d_max,n}(zeta_m)` for `m >= 2`, by inverting the
/// series of `P_{d,n}(zeta_m)` inside `Q(zeta_m)`. Works for any `n`.
pub fn m_dn_at_zeta(d_max: u64, n: u64, m: u64) -> Result<Vec<Poly>> {
    if m < 2 {
        return Err(Error::HypothesisNotMet(
            "need a nontrivial root of unity (m >= 2)".into(),
        ));
    }
    if n == 0 {
        return Err(Error::NonPositive {
            what: "number of variables n",
        });
    }
    let field = CyclotomicField::new(m)?;
    let a: Vec<Poly> = (0..=d_max).map(|d| p_at_zeta(&field, d, n)).collect();
    euler_invert_by_factors(&field, &a)
}

/// `M_{d,n}(zeta_m)` for `d <= d_max` by building `M_{d,n}` and reducing mod
/// `Phi_m`. Subject to the degree budget.
pub fn m_dn_at_zeta_direct(d_max: u64, n: u64, m: u64) -> Result<Vec<Poly>> {
    let field = CyclotomicField::new(m)?;
    Ok(m_dn(d_max, n)?.iter().map(|f| field.reduce(f)).collect())
}

/// Which space of real or complex points an Euler characteristic refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Field {
    Real,
    Complex,
}

/// Compactly supported Euler characteristic of the space of monic
/// irreducible degree-`d` polynomials in `n` variables: `M_{d,n}(1)` over `C`
/// and `M_{d,n}(-1)` over `R`, in closed form.
pub fn euler_char(d: u64, n: u64, field: Field) -> Result<i64> {
    if d == 0 || n == 0 {
        return Err(Error::NonPositive { what: "d and n" });
    }
    Ok(match field {
        Field::Complex => {
            if d == 1 {
                n as i64
            } else {
                0
            }
        }
        Field::Real => {
            let expansion =
                balanced_expansion(n, 2).expect("every n has a balanced binary expansion");
            prime_power_exponent(d, 2).map_or(0, |k| expansion.coeff(k))
        }
    })
}

/// `M_{1,n}(q) .. M_{d_max,n}(q)` for `q = 1` or `q = -1` by inverting the
/// scalar series `P_{d,n}(q)`, as an independent route to [`euler_char`].
pub fn m_dn_at_sign(d_max: u64, n: u64, field: Field) -> Result<Vec<Rat>> {
    let a = p_at_sign(d_max, n, field);
    euler_invert_in(&Rationals, &a)
}

/// `P_{d,n}(1) = ((n; d))` and `P_{d,n}(-1)`, for `d = 0..=d_max`.
pub fn p_at_sign(d_max: u64, n: u64, field: Field) -> Vec<Rat> {
    (0..=d_max)
        .map(|d| {
            let (upper, lower) = p_exponents(d, n);
            match field {
                Field::Complex => Rat::from_integer(BigInt::from(upper) - BigInt::from(lower)),
                // [k]_{-1} is 1 for odd k and 0 for even k
                Field::Real => {
                    let parity = |k: &BigUint| (k % 2u32 == BigUint::from(1u32)) as i64;
                    rat(parity(&upper) - parity(&lower))
                }
            }
        })
        .collect()
}

/// `sum over partitions lambda of d of prod ((chi_j; m_j))`, the right side
/// of the symmetric power formula, for `chi_j = euler_char(j, n, field)`.
pub fn macdonald_sum(d: u64, n: u64, field: Field) -> Result<Rat> {
    let chis = (1..=d.max(1))
        .map(|j| euler_char(j, n, field).map(rat))
        .collect::<Result<Vec<_>>>()?;
    Ok(partitions(d)
        .iter()
        .map(|lambda| {
            lambda
                .multiplicities()
                .iter()
                .map(|&(j, m)| multichoose_in(&Rationals, &chis[j as usize - 1], m))
                .fold(rat(1), |acc, f| acc * f)
        })
        .sum())
}

/// Values of `P_{d,n}(zeta_m)` and the least period in `d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeriodCertificate {
    pub n: u64,
    pub m: u64,
    pub period: u64,
    /// `P_{d,n}(zeta_m)` for `d = 0 .. 2 * period`, as coefficient lists.
    pub values: Vec<Vec<String>>,
    /// Whether the Lucas and exact-binomial residues agreed on every `d`
    /// checked (only meaningful for prime `m`).
    pub lucas_agrees: bool,
}

/// Finds the least period of `d -> P_{d,n}(zeta_m)` and confirms it over two
/// full periods. For prime `m` the period divides `m^L` with `m^L > n`;
/// otherwise candidates up to `max_period` are tried.
pub fn p_eval_periodicity(n: u64, m: u64, max_period: u64) -> Result<PeriodCertificate> {
    if m < 2 {
        return Err(Error::HypothesisNotMet(
            "need a nontrivial root of unity (m >= 2)".into(),
        ));
    }
    if n == 0 {
        return Err(Error::NonPositive {
            what: "number of variables n",
        });
    }
    let bound = if is_prime(m) {
        let mut q = 1u64;
        while q <= n {
            q = q.checked_mul(m).ok_or(Error::BudgetExceeded {
                what: "period bound",
                requested: u64::MAX,
                limit: max_period,
            })?;
        }
        q.min(max_period)
    } else {
        max_period
    };
    let field = CyclotomicField::new(m)?;
    let horizon = 2 * bound + 1;
    let values: Vec<Poly> = (0..horizon).map(|d| p_at_zeta(&field, d, n)).collect();
    let period = (1..=bound)
        .find(|&t| (0..horizon - t).all(|d| values[d as usize] == values[(d + t) as usize]))
        .ok_or(Error::BudgetExceeded {
            what: "period search",
            requested: bound + 1,
            limit: max_period,
        })?;
    let lucas_agrees = !is_prime(m)
        || (0..horizon).all(|d| {
            let exact = |a: u64, b: u64| (binomial(a, b) % BigUint::from(m)).to_u64().unwrap();
            lucas_binomial_mod(d + n, n, m) == exact(d + n, n)
                && (d == 0 || lucas_binomial_mod(d + n - 1, n, m) == exact(d + n - 1, n))
        });
    Ok(PeriodCertificate {
        n,
        m,
        period,
        values: values[..(2 * period + 1) as usize]
            .iter()
            .map(|v| {
                (0..field_degree(&field))
                    .map(|k| v.coeff(k).to_string())
                    .collect()
            })
            .collect(),
        lucas_agrees,
    })
}

fn field_degree(field: &CyclotomicField) -> u64 {
    crate::exactmath::euler_phi(field.order()).expect("m >= 1")
}
