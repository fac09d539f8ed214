//! Search for counterexamples to: if `Phi_m | M_d(x)` then `x^m - 1 | M_d(x)`,
//! or `m` is even and `x^(m/2) + 1 | M_d(x)`.
//!
//! Only squarefree `d` are scanned directly. For `d = c e` with `c` the
//! squarefree part, `S_d(x) = S_c(x^e)`, so the cyclotomic factors of `S_d`
//! are the factors of `Phi_n(x^e)` over the factors `Phi_n` of `S_c`.

use std::collections::hash_map::Entry;
use std::collections::{BTreeSet, HashMap};
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{necklace_s, squarefree_reduction};
use crate::error::{Error, Result};
use crate::exactmath::{cyclotomic, cyclotomic_divides, divisors, euler_phi};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Counterexample {
    pub m: u64,
    pub d: u64,
}

/// Progress of a run, written after every completed shard.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub m_max: u64,
    pub d_max: u64,
    /// First `d` not yet verified.
    pub next_d: u64,
    pub pairs_checked: u64,
    pub counterexamples: Vec<Counterexample>,
}

impl Checkpoint {
    pub fn load(path: &Path) -> Result<Option<Checkpoint>> {
        match fs::read_to_string(path) {
            Ok(text) => Ok(Some(serde_json::from_str(&text)?)),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e.into()),
        }
    }

    /// Writes via a temporary file and rename, so a crash never leaves a
    /// truncated checkpoint behind.
    pub fn save(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, serde_json::to_string_pretty(self)?)?;
        fs::rename(&tmp, path)?;
        Ok(())
    }
}

/// One contiguous block `start..=end` of `d` values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShardRecord {
    pub start: u64,
    pub end: u64,
    /// Number of `(m, d)` pairs with `m <= m_max` and `phi(m) <= d`.
    pub pairs_checked: u64,
    pub counterexamples: Vec<Counterexample>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjectureRun {
    pub m_max: u64,
    pub d_max: u64,
    pub shard_size: u64,
    start: Checkpoint,
}

impl ConjectureRun {
    pub fn new(m_max: u64, d_max: u64) -> Result<Self> {
        if m_max == 0 {
            return Err(Error::NonPositive { what: "m_max" });
        }
        if d_max == 0 {
            return Err(Error::NonPositive { what: "d_max" });
        }
        Ok(ConjectureRun {
            m_max,
            d_max,
            shard_size: 50,
            start: Checkpoint {
                m_max,
                d_max,
                next_d: 1,
                pairs_checked: 0,
                counterexamples: Vec::new(),
            },
        })
    }

    /// Continues from a checkpoint written by a run with the same bounds.
    pub fn resume(checkpoint: Checkpoint) -> Result<Self> {
        let mut run = ConjectureRun::new(checkpoint.m_max, checkpoint.d_max)?;
        run.start = checkpoint;
        Ok(run)
    }

    pub fn with_shard_size(mut self, size: u64) -> Result<Self> {
        if size == 0 {
            return Err(Error::NonPositive { what: "shard size" });
        }
        self.shard_size = size;
        Ok(self)
    }

    /// Runs the remaining shards on the current rayon pool.
    ///
    /// `on_shard` sees every shard in increasing order of `d`, together with
    /// the checkpoint that covers it, regardless of how many workers ran.
    pub fn run<F>(&self, mut on_shard: F) -> Result<Checkpoint>
    where
        F: FnMut(&ShardRecord, &Checkpoint) -> Result<()>,
    {
        let mut state = self.start.clone();
        let mut shards = Vec::new();
        let mut lo = state.next_d;
        while lo <= self.d_max {
            let hi = (lo + self.shard_size - 1).min(self.d_max);
            shards.push((lo, hi));
            lo = hi + 1;
        }
        let wave = rayon::current_num_threads().max(1) * 2;
        for chunk in shards.chunks(wave) {
            let records: Vec<ShardRecord> = chunk
                .par_iter()
                .map(|&(lo, hi)| check_shard(lo, hi, self.m_max))
                .collect::<Result<_>>()?;
            for record in records {
                state.next_d = record.end + 1;
                state.pairs_checked += record.pairs_checked;
                state
                    .counterexamples
                    .extend(record.counterexamples.iter().copied());
                on_shard(&record, &state)?;
            }
        }
        Ok(state)
    }
}

/// Counterexamples with `m <= m_max` and `d <= d_max`, in increasing `(d, m)`.
pub fn verify_conjecture(m_max: u64, d_max: u64) -> Result<Vec<Counterexample>> {
    Ok(ConjectureRun::new(m_max, d_max)?
        .run(|_, _| Ok(()))?
        .counterexamples)
}

/// [`verify_conjecture`] on a dedicated pool of `jobs` workers.
pub fn verify_conjecture_with(m_max: u64, d_max: u64, jobs: usize) -> Result<Vec<Counterexample>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Io(e.to_string()))?;
    pool.install(|| verify_conjecture(m_max, d_max))
}

fn check_shard(lo: u64, hi: u64, m_max: u64) -> Result<ShardRecord> {
    let mut record = ShardRecord {
        start: lo,
        end: hi,
        pairs_checked: 0,
        counterexamples: Vec::new(),
    };
    let mut squarefree_cache: HashMap<u64, Vec<u64>> = HashMap::new();
    let mut induced_cache: HashMap<(u64, u64), Vec<u64>> = HashMap::new();
    for d in lo..=hi {
        let (c, e) = squarefree_reduction(d)?;
        if let Entry::Vacant(slot) = squarefree_cache.entry(c) {
            slot.insert(squarefree_factors(c, m_max)?);
        }
        let base = &squarefree_cache[&c];
        let factors: BTreeSet<u64> = if e == 1 {
            base.iter().copied().collect()
        } else {
            let mut set = BTreeSet::new();
            for &n in base {
                let key = (n, e);
                if let Entry::Vacant(slot) = induced_cache.entry(key) {
                    slot.insert(induced_factors(n, e, m_max)?);
                }
                set.extend(induced_cache[&key].iter().copied());
            }
            set
        };
        for m in 1..=m_max {
            if euler_phi(m)? <= d {
                record.pairs_checked += 1;
            }
        }
        for &m in &factors {
            if !disjunction_holds(m, &factors)? {
                record.counterexamples.push(Counterexample { m, d });
            }
        }
    }
    Ok(record)
}

/// `{m <= m_max : Phi_m | S_c}` for squarefree `c`.
fn squarefree_factors(c: u64, m_max: u64) -> Result<Vec<u64>> {
    let s = necklace_s(c)?;
    let mut out = Vec::new();
    for m in 1..=m_max {
        if euler_phi(m)? <= c && cyclotomic_divides(&s, m)? {
            out.push(m);
        }
    }
    Ok(out)
}

/// `{m <= m_max : Phi_m | Phi_n(x^e)}`, found by scanning.
pub fn induced_factors(n: u64, e: u64, m_max: u64) -> Result<Vec<u64>> {
    let lifted = cyclotomic(n)?.substitute_power(e);
    let bound = lifted.degree().unwrap_or(0);
    let mut out = Vec::new();
    for m in 1..=m_max {
        if euler_phi(m)? <= bound && cyclotomic_divides(&lifted, m)? {
            out.push(m);
        }
    }
    Ok(out)
}

// x^m - 1 | f iff Phi_k | f for all k | m; x^(m/2) + 1 | f iff the same holds
// for all k | m with k not dividing m/2.
fn disjunction_holds(m: u64, factors: &BTreeSet<u64>) -> Result<bool> {
    let divs = divisors(m)?;
    if divs.iter().all(|k| factors.contains(k)) {
        return Ok(true);
    }
    Ok(m % 2 == 0
        && divs
            .iter()
            .filter(|&&k| (m / 2) % k != 0)
            .all(|k| factors.contains(k)))
}
