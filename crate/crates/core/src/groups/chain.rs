//! Chains `K = N_0 < N_1 < ... < N_{k+1} = G` with each link normal of prime
//! index, and the factorization `S_G = prod([p_i] - c_i[1]) S_K` they induce.

use num_bigint::BigInt;
use serde::Serialize;

use super::lattice::SubgroupLattice;
use super::table::FiniteGroup;
use crate::error::{Error, Result};
use crate::exactmath::{is_prime, rat, Poly};
use crate::frobenius::FrobElt;

/// A validated chain of subgroups, bottom first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormalChain {
    subgroups: Vec<u64>,
    primes: Vec<u64>,
    counts: Vec<u64>,
    stable: Vec<bool>,
}

impl NormalChain {
    /// Checks every link: both ends are subgroups, the lower one is normal in
    /// the upper one with prime index, and the top is all of `g`.
    pub fn new(g: &FiniteGroup, subgroups: Vec<u64>) -> Result<Self> {
        let invalid = |link: usize, reason: &str| Error::InvalidChain {
            link,
            reason: reason.to_string(),
        };
        if subgroups.is_empty() {
            return Err(invalid(0, "chain is empty"));
        }
        for (i, &n) in subgroups.iter().enumerate() {
            if !g.is_subgroup(n) {
                return Err(invalid(i, "not a subgroup"));
            }
        }
        if *subgroups.last().unwrap() != g.full_mask() {
            return Err(invalid(
                subgroups.len() - 1,
                "top of the chain is not the whole group",
            ));
        }
        let lattice = SubgroupLattice::new(g);
        let mut primes = Vec::new();
        let mut counts = Vec::new();
        let mut stable = Vec::new();
        for (i, w) in subgroups.windows(2).enumerate() {
            let (lo, hi) = (w[0], w[1]);
            if lo & !hi != 0 {
                return Err(invalid(
                    i,
                    "lower subgroup is not contained in the upper one",
                ));
            }
            let p = (hi.count_ones() / lo.count_ones()) as u64;
            if !is_prime(p) {
                return Err(invalid(i, &format!("index {p} is not prime")));
            }
            if !g.normalizes(hi, lo) {
                return Err(invalid(i, "lower subgroup is not normal in the upper one"));
            }
            primes.push(p);
            counts.push(complement_count(&lattice, lo, hi));
            stable.push(complements_normalize(g, &lattice, lo, hi));
        }
        Ok(NormalChain {
            subgroups,
            primes,
            counts,
            stable,
        })
    }

    pub fn subgroups(&self) -> &[u64] {
        &self.subgroups
    }

    /// Indices `p_i = [N_{i+1} : N_i]`.
    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Counts `c_i` of nontrivial `H <= N_{i+1}` with `N_i` meet `H` trivial.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Per link: whether every complement `H` of `N_i` in `N_{i+1}` normalizes
    /// every subgroup of `N_i`. This is what makes the interval `[H, N_{i+1}]`
    /// match the subgroups of `N_i`, and with it the factor `[p_i] - c_i[1]`.
    pub fn stable_links(&self) -> &[bool] {
        &self.stable
    }

    pub fn is_stable(&self) -> bool {
        self.stable.iter().all(|&b| b)
    }

    pub fn bottom(&self) -> u64 {
        self.subgroups[0]
    }

    /// `prod_i ([p_i] - c_i[1])`.
    pub fn operator(&self) -> FrobElt {
        self.primes
            .iter()
            .zip(&self.counts)
            .fold(FrobElt::one(), |acc, (&p, &c)| {
                let link = FrobElt::from_big_terms([(p, BigInt::from(1)), (1, -BigInt::from(c))]);
                &acc * &link
            })
    }
}

/// Nontrivial subgroups of `hi` meeting `lo` trivially.
fn complement_count(lattice: &SubgroupLattice, lo: u64, hi: u64) -> u64 {
    lattice.below(hi).filter(|&h| h != 1 && h & lo == 1).count() as u64
}

fn complements_normalize(g: &FiniteGroup, lattice: &SubgroupLattice, lo: u64, hi: u64) -> bool {
    let inner: Vec<u64> = lattice.below(lo).collect();
    lattice
        .below(hi)
        .filter(|&h| h != 1 && h & lo == 1)
        .all(|h| inner.iter().all(|&j| g.normalizes(h, j)))
}

/// Every chain from `k` up to `g`, each listed bottom first.
pub fn all_chains(g: &FiniteGroup, k: u64) -> Result<Vec<NormalChain>> {
    if !g.is_subgroup(k) {
        return Err(Error::NotASubgroup);
    }
    let lattice = SubgroupLattice::new(g);
    let mut out = Vec::new();
    let mut path = vec![g.full_mask()];
    collect_chains(g, &lattice, k, &mut path, &mut out);
    out.into_iter()
        .map(|mut p| {
            p.reverse();
            NormalChain::new(g, p)
        })
        .collect()
}

fn collect_chains(
    g: &FiniteGroup,
    lattice: &SubgroupLattice,
    k: u64,
    path: &mut Vec<u64>,
    out: &mut Vec<Vec<u64>>,
) {
    let top = *path.last().unwrap();
    if top == k {
        out.push(path.clone());
        return;
    }
    for n in prime_index_normal(g, lattice, k, top) {
        path.push(n);
        collect_chains(g, lattice, k, path, out);
        path.pop();
    }
}

/// Subgroups of `top` containing `k` that are normal of prime index in `top`,
/// in ascending mask order.
fn prime_index_normal(g: &FiniteGroup, lattice: &SubgroupLattice, k: u64, top: u64) -> Vec<u64> {
    let mut candidates: Vec<u64> = lattice
        .below(top)
        .filter(|&n| {
            n != top
                && k & !n == 0
                && is_prime((top.count_ones() / n.count_ones()) as u64)
                && g.normalizes(top, n)
        })
        .collect();
    candidates.sort_unstable();
    candidates
}

/// A chain from `k` up to `g` found by depth-first search from the top,
/// trying prime-index normal subgroups of the current link in ascending mask
/// order. `None` when no such chain exists (for `k = 1`: `g` is not solvable).
pub fn auto_chain(g: &FiniteGroup, k: u64) -> Result<Option<NormalChain>> {
    if !g.is_subgroup(k) {
        return Err(Error::NotASubgroup);
    }
    let lattice = SubgroupLattice::new(g);
    let mut path = vec![g.full_mask()];
    if descend(g, &lattice, k, &mut path) {
        path.reverse();
        NormalChain::new(g, path).map(Some)
    } else {
        Ok(None)
    }
}

fn descend(g: &FiniteGroup, lattice: &SubgroupLattice, k: u64, path: &mut Vec<u64>) -> bool {
    let top = *path.last().unwrap();
    if top == k {
        return true;
    }
    for n in prime_index_normal(g, lattice, k, top) {
        path.push(n);
        if descend(g, lattice, k, path) {
            return true;
        }
        path.pop();
    }
    false
}

/// Result of comparing the chain factorization with the lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainFactorization {
    pub operator: FrobElt,
    pub s_g: Poly,
    pub from_chain: Poly,
    pub verified: bool,
}

/// Builds `prod([p_i] - c_i[1])`, applies it to `S_K`, and compares with
/// `S_G` computed from the lattice.
pub fn chain_factorize(g: &FiniteGroup, chain: &NormalChain) -> Result<ChainFactorization> {
    if chain.subgroups.last() != Some(&g.full_mask()) {
        return Err(Error::InvalidChain {
            link: chain.subgroups.len().saturating_sub(1),
            reason: "chain belongs to a different group".into(),
        });
    }
    let lattice = SubgroupLattice::new(g);
    let operator = chain.operator();
    let s_k = lattice.s_of_subgroup(chain.bottom())?;
    let from_chain = operator.apply(&s_k);
    let s_g = lattice.s_g();
    let verified = from_chain == s_g;
    Ok(ChainFactorization {
        operator,
        s_g,
        from_chain,
        verified,
    })
}

/// Both sides of `mu(G) = (-1)^(k+1) c_0 ... c_k mu(K)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ChainMobius {
    pub formula: i64,
    pub lattice: i64,
}

impl ChainMobius {
    pub fn agrees(&self) -> bool {
        self.formula == self.lattice
    }
}

/// The chain formula for `mu(1, G)` next to the lattice value.
pub fn mobius_via_chain(g: &FiniteGroup, chain: &NormalChain) -> Result<ChainMobius> {
    let lattice = SubgroupLattice::new(g);
    let mu_k = lattice.mobius_interval(1, chain.bottom())?;
    let sign = if chain.counts.len() % 2 == 1 { -1 } else { 1 };
    let product: i64 = chain.counts.iter().map(|&c| c as i64).product();
    Ok(ChainMobius {
        formula: sign * product * mu_k,
        lattice: lattice.mobius(g.full_mask())?,
    })
}

/// For each link with `c_i = 1`: whether `x^(p_i - 1) - 1` divides `S_G`.
pub fn divisibility_transfer(g: &FiniteGroup, chain: &NormalChain) -> Vec<(u64, bool)> {
    let s_g = SubgroupLattice::new(g).s_g();
    chain
        .primes
        .iter()
        .zip(&chain.counts)
        .filter(|(&p, &c)| c == 1 && p > 2)
        .map(|(&p, _)| {
            let xm = Poly::from_terms([(p - 1, rat(1)), (0, rat(-1))]);
            (p, xm.divides(&s_g).expect("nonzero divisor"))
        })
        .collect()
}

/// For each link with `c_i > 1`: whether every coefficient of
/// `S_G mod x^(p_i - 1) - 1` is divisible by `c_i - 1`.
pub fn local_divisibility(g: &FiniteGroup, chain: &NormalChain) -> Vec<(u64, u64, bool)> {
    let s_g = SubgroupLattice::new(g).s_g();
    chain
        .primes
        .iter()
        .zip(&chain.counts)
        .filter(|(_, &c)| c > 1)
        .map(|(&p, &c)| {
            let r = s_g.reduce_mod_xm(p - 1, crate::exactmath::Sign::Minus);
            let ok = r.to_int_terms().is_ok_and(|terms| {
                terms
                    .iter()
                    .all(|(_, a)| (a % BigInt::from(c - 1)) == BigInt::from(0))
            });
            (p, c, ok)
        })
        .collect()
}
