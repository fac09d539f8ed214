//! Necklace systems: multisets of residue classes whose subset products
//! cancel in pairs, and the squarefree `d` they produce with
//! `x^m - 1 | M_d(x)` (unsigned) or `x^m + 1 | M_d(x)` (signed).
//!
//! Signed systems live modulo `2m`. A product `b + c m` with `0 <= b < m`
//! counts with sign `(-1)^c` at class `b`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::{gcd, is_prime, Sign};
use crate::frobenius::FrobElt;
use crate::necklace::divides_xm;

/// How many primes a residue class contains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Availability {
    /// A unit class: infinitely many primes.
    Infinite,
    /// Exactly one prime.
    Isolated(u64),
    /// No primes at all.
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ResidueClass {
    pub value: u64,
    pub modulus: u64,
    pub availability: Availability,
}

impl ResidueClass {
    pub fn new(value: u64, modulus: u64) -> Self {
        assert!(modulus >= 1, "modulus must be positive");
        let value = value % modulus;
        let g = gcd(value, modulus);
        let availability = if g == 1 {
            Availability::Infinite
        } else if value > 0 && value == g && is_prime(value) {
            // value | modulus, so every other member is a proper multiple of value
            Availability::Isolated(value)
        } else if value == 0 && is_prime(modulus) {
            Availability::Isolated(modulus)
        } else {
            Availability::Empty
        };
        ResidueClass {
            value,
            modulus,
            availability,
        }
    }
}

/// A multiset of residue classes, stored sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NecklaceSystem {
    pub m: u64,
    pub signed: bool,
    /// Residues mod `m`, or mod `2m` when signed.
    pub residues: Vec<u64>,
}

impl NecklaceSystem {
    /// Reduces and sorts the residues and checks the structural rules: no
    /// empty class, and no isolated class used twice.
    pub fn new(m: u64, signed: bool, residues: &[u64]) -> Result<Self> {
        if m == 0 {
            return Err(Error::NonPositive { what: "m" });
        }
        let modulus = if signed { 2 * m } else { m };
        let mut residues: Vec<u64> = residues.iter().map(|r| r % modulus).collect();
        residues.sort_unstable();
        let s = NecklaceSystem {
            m,
            signed,
            residues,
        };
        for (i, class) in s.classes().iter().enumerate() {
            match class.availability {
                Availability::Empty => {
                    return Err(Error::InvalidSystem(format!(
                        "class {} mod {} contains no prime",
                        class.value, modulus
                    )))
                }
                Availability::Isolated(_) if i > 0 && s.residues[i - 1] == class.value => {
                    return Err(Error::InvalidSystem(format!(
                        "isolated class {} mod {} repeated",
                        class.value, modulus
                    )))
                }
                _ => {}
            }
        }
        Ok(s)
    }

    pub fn modulus(&self) -> u64 {
        if self.signed {
            2 * self.m
        } else {
            self.m
        }
    }

    pub fn sign(&self) -> Sign {
        if self.signed {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn classes(&self) -> Vec<ResidueClass> {
        self.residues
            .iter()
            .map(|&r| ResidueClass::new(r, self.modulus()))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.residues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.residues.is_empty()
    }

    /// `prod ([a] - [1])` over the classes, as a Frobenius element.
    pub fn operator(&self) -> FrobElt {
        self.residues.iter().fold(FrobElt::one(), |acc, &a| {
            &acc * &FrobElt::from_terms([(a, 1), (1, -1)])
        })
    }

    /// Signed count per class over all sub-multisets `T`: weight
    /// `(-1)^|T|`, times the sign of the product when signed.
    fn accumulators(&self) -> Vec<i64> {
        let m = self.m;
        let modulus = self.modulus();
        let k = self.residues.len();
        let mut acc = vec![0i64; m as usize];
        for mask in 0u32..(1 << k) {
            let mut prod = 1 % modulus;
            for (i, &a) in self.residues.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    prod = prod * a % modulus;
                }
            }
            let mut w = if mask.count_ones() % 2 == 0 { 1 } else { -1 };
            let b = prod % m;
            if self.signed && prod >= m {
                w = -w;
            }
            acc[b as usize] += w;
        }
        acc
    }

    fn sub_multiset(&self, mask: u32) -> NecklaceSystem {
        NecklaceSystem {
            m: self.m,
            signed: self.signed,
            residues: self
                .residues
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &r)| r)
                .collect(),
        }
    }
}

const MAX_SIZE: usize = 6;

/// Whether every class receives as many even as odd sub-multisets
/// (counted with signs when `S` is signed).
pub fn is_system(s: &NecklaceSystem) -> Result<bool> {
    if s.len() > 20 {
        return Err(Error::BudgetExceeded {
            what: "system size",
            requested: s.len() as u64,
            limit: 20,
        });
    }
    Ok(s.accumulators().iter().all(|&c| c == 0))
}

/// The same question asked in the Frobenius quotient `Psi[m]` or `Psi[m]_+-`.
pub fn is_system_via_operator(s: &NecklaceSystem) -> bool {
    let op = s.operator();
    if s.signed {
        op.reduce_signed(s.m).is_zero()
    } else {
        op.reduce(s.m).is_zero()
    }
}

/// A system none of whose proper sub-multisets is a system.
pub fn is_primitive(s: &NecklaceSystem) -> Result<bool> {
    if !is_system(s)? {
        return Ok(false);
    }
    let full = (1u32 << s.len()) - 1;
    for mask in 0..full {
        if is_system(&s.sub_multiset(mask))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All primitive systems with at most `max_size` classes, ordered by size
/// and then by residues.
pub fn search_primitive(m: u64, signed: bool, max_size: usize) -> Result<Vec<NecklaceSystem>> {
    if m == 0 {
        return Err(Error::NonPositive { what: "m" });
    }
    if max_size > MAX_SIZE {
        return Err(Error::BudgetExceeded {
            what: "system size",
            requested: max_size as u64,
            limit: MAX_SIZE as u64,
        });
    }
    let modulus = if signed { 2 * m } else { m };
    let usable: Vec<ResidueClass> = (0..modulus)
        .map(|r| ResidueClass::new(r, modulus))
        .filter(|c| c.availability != Availability::Empty)
        .collect();
    let mut found: Vec<NecklaceSystem> = (0..usable.len())
        .into_par_iter()
        .map(|first| {
            let mut out = Vec::new();
            let mut stack = vec![first];
            extend_search(m, signed, &usable, &mut stack, max_size, &mut out)?;
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    found.sort_by(|a, b| (a.len(), &a.residues).cmp(&(b.len(), &b.residues)));
    Ok(found)
}

// `stack` holds non-decreasing indices into `usable`.
fn extend_search(
    m: u64,
    signed: bool,
    usable: &[ResidueClass],
    stack: &mut Vec<usize>,
    max_size: usize,
    out: &mut Vec<NecklaceSystem>,
) -> Result<()> {
    let s = NecklaceSystem {
        m,
        signed,
        residues: stack.iter().map(|&i| usable[i].value).collect(),
    };
    if is_system(&s)? {
        if is_primitive(&s)? {
            out.push(s);
        }
        // any extension contains this system, so it cannot be primitive
        return Ok(());
    }
    if stack.len() == max_size {
        return Ok(());
    }
    let last = *stack.last().expect("nonempty");
    for next in last..usable.len() {
        if next == last && matches!(usable[next].availability, Availability::Isolated(_)) {
            continue;
        }
        stack.push(next);
        extend_search(m, signed, usable, stack, max_size, out)?;
        stack.pop();
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    /// Two classes forming a primitive signed system.
    SignedPair,
    /// Three units `a, b, c` with squares `1`, product `1`, none `1`.
    Triple,
}

/// An instance of `family` modulo `m`, validated as a primitive system.
///
/// For pairs the classes `m - 1, 2m - 1` are tried first; when they fail
/// (an empty class, or `m - 1 = 1` for `m = 2`) the lexicographically first
/// size-2 primitive signed system is returned, if any.
pub fn family_witness(m: u64, family: Family) -> Result<Option<NecklaceSystem>> {
    if m < 2 {
        return Err(Error::HypothesisNotMet("need m >= 2".into()));
    }
    let candidate = match family {
        Family::SignedPair => {
            let direct = NecklaceSystem::new(m, true, &[m - 1, 2 * m - 1]).ok();
            match direct {
                Some(s) if is_primitive(&s)? => Some(s),
                _ => search_primitive(m, true, 2)?
                    .into_iter()
                    .find(|s| s.len() == 2),
            }
        }
        Family::Triple => {
            let roots: Vec<u64> = (2..m)
                .filter(|&a| gcd(a, m) == 1 && a * a % m == 1)
                .collect();
            let mut hit = None;
            'outer: for (i, &a) in roots.iter().enumerate() {
                for (j, &b) in roots.iter().enumerate().skip(i + 1) {
                    for &c in &roots[j + 1..] {
                        if a * b % m * c % m == 1 % m {
                            hit = Some(NecklaceSystem::new(m, false, &[a, b, c])?);
                            break 'outer;
                        }
                    }
                }
            }
            hit
        }
    };
    match candidate {
        Some(s) if is_primitive(&s)? => Ok(Some(s)),
        _ => Ok(None),
    }
}

/// The squarefree `d` built from the smallest unused prime in each class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalD {
    pub d: u64,
    /// One prime per class, in the order of the sorted residues.
    pub primes: Vec<u64>,
    /// `x^m -+ 1 | S_d`.
    pub divides: bool,
    /// No proper divisor of `d` has that property.
    pub minimal: bool,
}

pub const DEFAULT_PRIME_CUTOFF: u64 = 1_000_000;

/// Realizes a system by distinct primes and certifies the result.
pub fn system_to_minimal_d(s: &NecklaceSystem, cutoff: u64) -> Result<MinimalD> {
    if !is_system(s)? {
        return Err(Error::InvalidSystem("not a necklace system".into()));
    }
    let modulus = s.modulus();
    let mut primes: Vec<u64> = Vec::new();
    for class in s.classes() {
        let p = match class.availability {
            Availability::Empty => {
                return Err(Error::InvalidSystem(format!(
                    "class {} mod {modulus} contains no prime",
                    class.value
                )))
            }
            Availability::Isolated(p) => p,
            Availability::Infinite => {
                let mut cand = class.value;
                loop {
                    if cand > cutoff {
                        return Err(Error::PrimeSearchCutoff {
                            residue: class.value,
                            modulus,
                            cutoff,
                        });
                    }
                    if is_prime(cand) && !primes.contains(&cand) {
                        break cand;
                    }
                    cand += modulus;
                }
            }
        };
        if primes.contains(&p) {
            return Err(Error::InvalidSystem(format!("prime {p} needed twice")));
        }
        primes.push(p);
    }
    let d = primes
        .iter()
        .try_fold(1u64, |acc, &p| acc.checked_mul(p))
        .ok_or(Error::BudgetExceeded {
            what: "d",
            requested: u64::MAX,
            limit: u64::MAX,
        })?;
    let sign = s.sign();
    let divides = divides_xm(d, s.m, sign)?;
    let mut minimal = true;
    let k = primes.len();
    for mask in 0..(1u32 << k) - 1 {
        let e: u64 = (0..k)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| primes[i])
            .product();
        if divides_xm(e, s.m, sign)? {
            minimal = false;
            break;
        }
    }
    Ok(MinimalD {
        d,
        primes,
        divides,
        minimal,
    })
}

/// Residues of the prime factors of squarefree `d`, as a system candidate.
pub fn system_of(d: u64, m: u64, signed: bool) -> Result<NecklaceSystem> {
    let f = crate::exactmath::Factorization::of(d)?;
    if !f.is_squarefree() {
        return Err(Error::HypothesisNotMet(format!("{d} is not squarefree")));
    }
    let modulus = if signed { 2 * m } else { m };
    let residues: Vec<u64> = f.primes().map(|p| p % modulus).collect();
    // primes realize their classes, so the structural rules hold automatically
    NecklaceSystem::new(m, signed, &residues)
}
