//! Frobenius operators `[k] f(x) = f(x^k)` and their integer combinations.
//!
//! [`FrobElt`] is an element of the monoid ring on `(N, *)` with `[0]`
//! included: `[0]` is a genuine symbol (it sends `f` to the constant
//! `f(1)`), not the zero element.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::Result;
use crate::exactmath::{Factorization, Poly, Rat};

/// A finite sum `sum a_k [k]` with integer coefficients.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct FrobElt {
    terms: BTreeMap<u64, BigInt>,
}

impl FrobElt {
    pub fn zero() -> Self {
        FrobElt::default()
    }

    /// The identity `[1]`.
    pub fn one() -> Self {
        FrobElt::symbol(1)
    }

    /// The single symbol `[k]`.
    pub fn symbol(k: u64) -> Self {
        FrobElt::from_terms([(k, 1)])
    }

    pub fn from_terms<I: IntoIterator<Item = (u64, i64)>>(terms: I) -> Self {
        let mut out = FrobElt::zero();
        for (k, a) in terms {
            out.add_term(k, BigInt::from(a));
        }
        out
    }

    pub fn from_big_terms<I: IntoIterator<Item = (u64, BigInt)>>(terms: I) -> Self {
        let mut out = FrobElt::zero();
        for (k, a) in terms {
            out.add_term(k, a);
        }
        out
    }

    /// The unique `[f]` with `[f] x = f(x)`; needs integer coefficients.
    pub fn from_poly(f: &Poly) -> Result<Self> {
        Ok(FrobElt::from_big_terms(f.to_int_terms()?))
    }

    pub fn add_term(&mut self, k: u64, a: BigInt) {
        if a.is_zero() {
            return;
        }
        let slot = self.terms.entry(k).or_insert_with(BigInt::zero);
        *slot += a;
        if slot.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, k: u64) -> BigInt {
        self.terms.get(&k).cloned().unwrap_or_default()
    }

    /// `(index, coefficient)` pairs in ascending index order.
    pub fn terms(&self) -> impl Iterator<Item = (u64, &BigInt)> + '_ {
        self.terms.iter().map(|(&k, a)| (k, a))
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        FrobElt::from_big_terms(self.terms.iter().map(|(&k, a)| (k, a * c)))
    }

    /// `sum a_k f(x^k)`.
    pub fn apply(&self, f: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (&k, a) in &self.terms {
            out += &f.substitute_power(k).scale(&Rat::from_integer(a.clone()));
        }
        out
    }

    /// `[self] x` as a polynomial.
    pub fn apply_to_x(&self) -> Poly {
        Poly::from_terms(
            self.terms
                .iter()
                .map(|(&k, a)| (k, Rat::from_integer(a.clone()))),
        )
    }

    /// Image under the ring map `[a] -> a`.
    pub fn augmentation(&self) -> BigInt {
        self.terms.iter().map(|(&k, a)| a * BigInt::from(k)).sum()
    }

    /// True when every symbol index is odd.
    pub fn is_odd_supported(&self) -> bool {
        self.terms.keys().all(|k| k % 2 == 1)
    }

    /// Image in the quotient by `[a] = [b]` whenever `a = b mod m`.
    pub fn reduce(&self, m: u64) -> PsiModM {
        assert!(m >= 1, "modulus must be positive");
        let mut coeffs = vec![BigInt::zero(); m as usize];
        for (&k, a) in &self.terms {
            coeffs[(k % m) as usize] += a;
        }
        PsiModM { m, coeffs }
    }

    /// Image in the quotient by `[b + m] = -[b]` (indices folded mod `2m`).
    ///
    /// Vanishing here implies `x^m + 1` divides `[self] f` only for odd `f`;
    /// callers are responsible for that restriction.
    pub fn reduce_signed(&self, m: u64) -> PsiModMSigned {
        assert!(m >= 1, "modulus must be positive");
        let mut coeffs = vec![BigInt::zero(); m as usize];
        for (&k, a) in &self.terms {
            let t = k % (2 * m);
            if t >= m {
                coeffs[(t - m) as usize] -= a;
            } else {
                coeffs[t as usize] += a;
            }
        }
        PsiModMSigned { m, coeffs }
    }
}

/// `phi[d] = prod_{p^e || d} ([p^e] - [p^(e-1)])`, so that `phi[d] x = S_d(x)`.
pub fn phi_op(d: u64) -> Result<FrobElt> {
    let f = Factorization::of(d)?;
    let mut acc = FrobElt::one();
    for &(p, e) in f.factors() {
        let hi = p.pow(e);
        let factor = FrobElt::from_terms([(hi, 1), (hi / p, -1)]);
        acc = &acc * &factor;
    }
    Ok(acc)
}

/// An element of `Psi[m]`: coefficients indexed by residues mod `m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PsiModM {
    pub m: u64,
    pub coeffs: Vec<BigInt>,
}

impl PsiModM {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

/// An element of `Psi[m]_+-`: residues mod `2m` folded by `[b + m] = -[b]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PsiModMSigned {
    pub m: u64,
    pub coeffs: Vec<BigInt>,
}

impl PsiModMSigned {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

impl fmt::Debug for FrobElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FrobElt({self})")
    }
}

impl fmt::Display for FrobElt {
    /// Descending indices, e.g. `[10] - [5] - [2] + [1]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (k, a)) in self.terms.iter().rev().enumerate() {
            let neg = a.is_negative();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let abs = a.abs();
            if !abs.is_one() {
                write!(f, "{abs}")?;
            }
            write!(f, "[{k}]")?;
        }
        Ok(())
    }
}

impl Add<&FrobElt> for &FrobElt {
    type Output = FrobElt;
    fn add(self, rhs: &FrobElt) -> FrobElt {
        let mut out = self.clone();
        for (&k, a) in &rhs.terms {
            out.add_term(k, a.clone());
        }
        out
    }
}

impl Sub<&FrobElt> for &FrobElt {
    type Output = FrobElt;
    fn sub(self, rhs: &FrobElt) -> FrobElt {
        self + &(-rhs)
    }
}

impl Neg for &FrobElt {
    type Output = FrobElt;
    fn neg(self) -> FrobElt {
        FrobElt::from_big_terms(self.terms.iter().map(|(&k, a)| (k, -a)))
    }
}

impl Mul<&FrobElt> for &FrobElt {
    type Output = FrobElt;
    fn mul(self, rhs: &FrobElt) -> FrobElt {
        let mut out = FrobElt::zero();
        for (&a, ca) in &self.terms {
            for (&b, cb) in &rhs.terms {
                out.add_term(a * b, ca * cb);
            }
        }
        out
    }
}
