//! Sparse univariate polynomials with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::Rat;
use crate::error::{Error, Result};

/// Which binomial `x^m - 1` (`Minus`) or `x^m + 1` (`Plus`) to work modulo.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn symbol(self) -> char {
        match self {
            Sign::Minus => '-',
            Sign::Plus => '+',
        }
    }
}

/// A polynomial `sum c_k x^k` over the rationals.
///
/// Only nonzero coefficients are stored, so a polynomial like
/// `x^6061 - x^551 - ...` costs eight entries.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    terms: BTreeMap<u64, Rat>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Rat::one())
    }

    pub fn x() -> Self {
        Poly::monomial(1, Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Poly::monomial(0, c)
    }

    pub fn monomial(exp: u64, c: Rat) -> Self {
        let mut p = Poly::zero();
        p.add_term(exp, c);
        p
    }

    /// `x^m - 1` or `x^m + 1`.
    pub fn xm(m: u64, sign: Sign) -> Self {
        let c = match sign {
            Sign::Minus => -Rat::one(),
            Sign::Plus => Rat::one(),
        };
        let mut p = Poly::monomial(m, Rat::one());
        p.add_term(0, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (u64, Rat)>>(terms: I) -> Self {
        let mut p = Poly::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn from_int_terms<I: IntoIterator<Item = (u64, i64)>>(terms: I) -> Self {
        Poly::from_terms(
            terms
                .into_iter()
                .map(|(e, c)| (e, Rat::from_integer(c.into()))),
        )
    }

    /// Dense coefficients, lowest degree first.
    pub fn from_coeffs(coeffs: &[i64]) -> Self {
        Poly::from_int_terms(coeffs.iter().enumerate().map(|(i, &c)| (i as u64, c)))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u64> {
        self.terms.keys().next_back().copied()
    }

    /// Smallest exponent with a nonzero coefficient.
    pub fn low_degree(&self) -> Option<u64> {
        self.terms.keys().next().copied()
    }

    pub fn leading_coeff(&self) -> Option<&Rat> {
        self.terms.values().next_back()
    }

    pub fn coeff(&self, exp: u64) -> Rat {
        self.terms.get(&exp).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Nonzero terms in ascending exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (u64, &Rat)> + '_ {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn add_term(&mut self, exp: u64, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_constant(&self) -> bool {
        self.degree().is_none_or(|d| d == 0)
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// Integer coefficients, or the first exponent that is not integral.
    pub fn to_int_terms(&self) -> Result<Vec<(u64, BigInt)>> {
        self.terms
            .iter()
            .map(|(&e, c)| {
                if c.is_integer() {
                    Ok((e, c.to_integer()))
                } else {
                    Err(Error::NonIntegerCoefficient { exponent: e })
                }
            })
            .collect()
    }

    /// A nonzero integer multiple of `self` with the same roots.
    pub fn clear_denominators(&self) -> Vec<(u64, BigInt)> {
        let lcm = self.terms.values().fold(BigInt::one(), |acc, c| {
            num_integer::Integer::lcm(&acc, c.denom())
        });
        self.terms
            .iter()
            .map(|(&e, c)| (e, (c * Rat::from_integer(lcm.clone())).to_integer()))
            .collect()
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(&e, v)| (e, v * c)).collect(),
        }
    }

    /// Multiplies by `x^k`.
    pub fn shift(&self, k: u64) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(&e, v)| (e + k, v.clone()))
                .collect(),
        }
    }

    pub fn eval(&self, at: &Rat) -> Rat {
        // Horner over the sparse gaps
        let mut acc = Rat::zero();
        let mut prev: Option<u64> = None;
        for (&e, c) in self.terms.iter().rev() {
            if let Some(p) = prev {
                acc *= pow_rat(at, p - e);
            }
            acc += c;
            prev = Some(e);
        }
        if let Some(p) = prev {
            acc *= pow_rat(at, p);
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(&e, _)| e > 0)
                .map(|(&e, c)| (e - 1, c * Rat::from_integer(e.into())))
                .collect(),
        }
    }

    /// `f(x^k)`; for `k = 0` this is the constant `f(1)`.
    pub fn substitute_power(&self, k: u64) -> Poly {
        if k == 0 {
            return Poly::constant(self.terms.values().cloned().sum());
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(&e, c)| (e * k, c.clone()))
                .collect(),
        }
    }

    /// Canonical remainder modulo `x^m - 1` or `x^m + 1`, of degree `< m`.
    pub fn reduce_mod_xm(&self, m: u64, sign: Sign) -> Poly {
        assert!(m >= 1, "modulus must be positive");
        let mut out = Poly::zero();
        for (&e, c) in &self.terms {
            match sign {
                Sign::Minus => out.add_term(e % m, c.clone()),
                Sign::Plus => {
                    let t = e % (2 * m);
                    if t >= m {
                        out.add_term(t - m, -c.clone());
                    } else {
                        out.add_term(t, c.clone());
                    }
                }
            }
        }
        out
    }

    /// Long division: `self = q * g + r` with `deg r < deg g`.
    pub fn divrem(&self, g: &Poly) -> Result<(Poly, Poly)> {
        let dg = g.degree().ok_or(Error::DivisionByZero)?;
        let lc = g.leading_coeff().expect("nonzero").clone();
        let lc_is_one = lc.is_one();
        let mut r = self.clone();
        let mut q = Poly::zero();
        while let Some(dr) = r.degree() {
            if dr < dg {
                break;
            }
            let (_, top) = r.terms.pop_last().expect("nonzero");
            let factor = if lc_is_one { top } else { top / &lc };
            let shift = dr - dg;
            for (&ge, gc) in g.terms.range(..dg) {
                r.add_term(ge + shift, -(gc * &factor));
            }
            q.terms.insert(shift, factor);
        }
        Ok((q, r))
    }

    /// Quotient of an exact division; errors if the remainder is nonzero.
    pub fn div_exact(&self, g: &Poly) -> Result<Poly> {
        let (q, r) = self.divrem(g)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::HypothesisNotMet("division is not exact".into()))
        }
    }

    pub fn divides(&self, f: &Poly) -> Result<bool> {
        Ok(f.divrem(self)?.1.is_zero())
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }
}

fn pow_rat(base: &Rat, exp: u64) -> Rat {
    num_traits::pow::pow(base.clone(), exp as usize)
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl fmt::Display for Poly {
    /// Descending terms, e.g. `x^2 - x + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (&e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let unit = abs.is_one();
            if !unit || e == 0 {
                if abs.is_integer() {
                    write!(f, "{abs}")?;
                } else {
                    write!(f, "({abs})")?;
                }
            }
            match e {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{e}")?,
            }
        }
        Ok(())
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(&e, c)| (e, -c.clone())).collect(),
        }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(mut self) -> Poly {
        for c in self.terms.values_mut() {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        for (&e, c) in &rhs.terms {
            self.add_term(e, c.clone());
        }
    }
}

impl SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, rhs: &Poly) {
        for (&e, c) in &rhs.terms {
            self.add_term(e, -c.clone());
        }
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Poly {
    fn common_denominator(&self) -> BigInt {
        self.terms.values().fold(BigInt::one(), |acc, c| {
            num_integer::Integer::lcm(&acc, c.denom())
        })
    }

    /// Integer coefficients scaled by `den`, which must clear every denominator.
    fn scaled_integers(&self, den: &BigInt) -> Vec<(u64, BigInt)> {
        self.terms
            .iter()
            .map(|(&e, c)| (e, c.numer() * (den / c.denom())))
            .collect()
    }

    /// Product over the integers after clearing denominators, so that the
    /// inner loop adds big integers instead of normalizing rationals.
    fn mul_cleared(&self, rhs: &Poly) -> Poly {
        let (da, db) = (self.common_denominator(), rhs.common_denominator());
        let (xa, xb) = (self.scaled_integers(&da), rhs.scaled_integers(&db));
        let den = da * db;
        let (lo_a, lo_b) = (xa[0].0, xb[0].0);
        let span = (xa[xa.len() - 1].0 - lo_a) + (xb[xb.len() - 1].0 - lo_b) + 1;
        let mut out = Poly::zero();
        if span as usize <= 4 * xa.len() * xb.len() {
            let mut acc = vec![BigInt::zero(); span as usize];
            for (a, ca) in &xa {
                for (b, cb) in &xb {
                    acc[(a - lo_a + b - lo_b) as usize] += ca * cb;
                }
            }
            for (i, c) in acc.into_iter().enumerate() {
                if !c.is_zero() {
                    out.terms
                        .insert(lo_a + lo_b + i as u64, Rat::new(c, den.clone()));
                }
            }
        } else {
            let mut acc: BTreeMap<u64, BigInt> = BTreeMap::new();
            for (a, ca) in &xa {
                for (b, cb) in &xb {
                    *acc.entry(a + b).or_default() += ca * cb;
                }
            }
            for (e, c) in acc {
                if !c.is_zero() {
                    out.terms.insert(e, Rat::new(c, den.clone()));
                }
            }
        }
        out
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        if self.terms.len() * rhs.terms.len() > 64 {
            return self.mul_cleared(rhs);
        }
        let mut out = Poly::zero();
        for (&a, ca) in &self.terms {
            for (&b, cb) in &rhs.terms {
                out.add_term(a + b, ca * cb);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                (&self).$method(rhs)
            }
        }
        impl $tr<Poly> for &Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl std::iter::Sum for Poly {
    fn sum<I: Iterator<Item = Poly>>(iter: I) -> Poly {
        let mut acc = Poly::zero();
        for p in iter {
            acc += &p;
        }
        acc
    }
}
