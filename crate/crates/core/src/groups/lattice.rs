//! Subgroup lattices, their Moebius function, and `G`-necklace polynomials
//! `S_G(x) = sum_{H <= G} mu(1, H) x^[G:H]`.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::One;

use super::table::{elements, FiniteGroup};
use crate::error::{Error, Result};
use crate::exactmath::{rat, Poly, Rat};

/// Every subgroup of a group, as element masks sorted by size and then mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupLattice {
    order: usize,
    subgroups: Vec<u64>,
    index: HashMap<u64, usize>,
    mobius_bottom: Vec<i64>,
}

impl SubgroupLattice {
    /// Cyclic subgroups joined with each other until nothing new appears.
    /// Every subgroup is generated by its cyclic subgroups, so this finds all.
    pub fn new(g: &FiniteGroup) -> Self {
        let cyclic: BTreeSet<u64> = (0..g.order()).map(|x| g.generated(1 << x)).collect();
        let mut all: BTreeSet<u64> = cyclic.clone();
        let mut frontier: Vec<u64> = cyclic.iter().copied().collect();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &h in &frontier {
                for &c in &cyclic {
                    if c & !h == 0 {
                        continue;
                    }
                    let j = g.generated(h | c);
                    if all.insert(j) {
                        next.push(j);
                    }
                }
            }
            frontier = next;
        }
        Self::from_masks(g.order(), all)
    }

    /// Builds the lattice from a complete list of subgroup masks.
    pub fn from_masks(order: usize, masks: impl IntoIterator<Item = u64>) -> Self {
        let mut subgroups: Vec<u64> = masks
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        subgroups.sort_by_key(|&m| (m.count_ones(), m));
        let index = subgroups.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let mut lattice = SubgroupLattice {
            order,
            subgroups,
            index,
            mobius_bottom: Vec::new(),
        };
        lattice.mobius_bottom = lattice.mobius_from(1).expect("trivial subgroup present");
        lattice
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    pub fn subgroups(&self) -> &[u64] {
        &self.subgroups
    }

    pub fn group_order(&self) -> usize {
        self.order
    }

    pub fn contains(&self, mask: u64) -> bool {
        self.index.contains_key(&mask)
    }

    /// Top element (the whole group).
    pub fn top(&self) -> u64 {
        *self.subgroups.last().expect("nonempty")
    }

    /// `mu(1, H)`.
    pub fn mobius(&self, h: u64) -> Result<i64> {
        let i = *self.index.get(&h).ok_or(Error::NotASubgroup)?;
        Ok(self.mobius_bottom[i])
    }

    /// `mu(K, H)` on the interval `[K, H]`; zero unless `K <= H`.
    pub fn mobius_interval(&self, k: u64, h: u64) -> Result<i64> {
        let i = *self.index.get(&h).ok_or(Error::NotASubgroup)?;
        Ok(self.mobius_from(k)?[i])
    }

    /// `mu(K, H)` for every `H`, indexed like [`Self::subgroups`].
    fn mobius_from(&self, k: u64) -> Result<Vec<i64>> {
        if !self.contains(k) {
            return Err(Error::NotASubgroup);
        }
        let mut mu = vec![0i64; self.subgroups.len()];
        for (i, &h) in self.subgroups.iter().enumerate() {
            if k & !h != 0 {
                continue;
            }
            if h == k {
                mu[i] = 1;
                continue;
            }
            // sizes ascend, so every proper subgroup of h comes earlier
            let s: i64 = (0..i)
                .filter(|&j| {
                    let sub = self.subgroups[j];
                    sub & !h == 0 && k & !sub == 0
                })
                .map(|j| mu[j])
                .sum();
            mu[i] = -s;
        }
        Ok(mu)
    }

    /// Subgroups contained in `k`, in lattice order.
    pub fn below(&self, k: u64) -> impl Iterator<Item = u64> + '_ {
        self.subgroups.iter().copied().filter(move |&h| h & !k == 0)
    }

    /// `S_{G,K}(x) = sum_{K <= H <= G} mu(K, H) x^[G:H]`.
    pub fn s_relative(&self, k: u64) -> Result<Poly> {
        let mu = self.mobius_from(k)?;
        let n = self.order as u64;
        Ok(Poly::from_terms(
            self.subgroups
                .iter()
                .zip(&mu)
                .filter(|(_, &m)| m != 0)
                .map(|(&h, &m)| (n / h.count_ones() as u64, rat(m))),
        ))
    }

    /// `S_K(x)` for the subgroup `K` regarded as a group in its own right.
    pub fn s_of_subgroup(&self, k: u64) -> Result<Poly> {
        if !self.contains(k) {
            return Err(Error::NotASubgroup);
        }
        let size = k.count_ones() as u64;
        let mut out = Poly::zero();
        for h in self.below(k) {
            out.add_term(size / h.count_ones() as u64, rat(self.mobius(h)?));
        }
        Ok(out)
    }

    /// `S_G(x)`.
    pub fn s_g(&self) -> Poly {
        self.s_relative(1).expect("trivial subgroup present")
    }

    /// `M_G(x) = S_G(x) / |G|`.
    pub fn m_g(&self) -> Poly {
        self.s_g()
            .scale(&Rat::new(BigInt::one(), (self.order as u64).into()))
    }
}

/// `S_G(x)` for a group.
pub fn g_necklace_s(g: &FiniteGroup) -> Poly {
    SubgroupLattice::new(g).s_g()
}

/// `M_G(x)` for a group.
pub fn g_necklace_m(g: &FiniteGroup) -> Poly {
    SubgroupLattice::new(g).m_g()
}

/// All subgroups by testing every subset that contains the identity.
/// Exponential; meant as a cross-check for small groups.
pub fn brute_force_subgroups(g: &FiniteGroup) -> Result<Vec<u64>> {
    let n = g.order();
    if n > 16 {
        return Err(Error::BudgetExceeded {
            what: "brute-force group order",
            requested: n as u64,
            limit: 16,
        });
    }
    let mut out: Vec<u64> = (0u64..(1 << (n - 1)))
        .map(|rest| 1 | (rest << 1))
        .filter(|&mask| g.is_subgroup(mask))
        .collect();
    out.sort_by_key(|&m| (m.count_ones(), m));
    Ok(out)
}

/// Element ids of a mask, for display.
pub fn mask_elements(mask: u64) -> Vec<usize> {
    elements(mask).collect()
}
