//! Finite groups given by a multiplication table.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported order; subgroups are stored as 64-bit element masks.
pub const MAX_ORDER: usize = 64;

/// A finite group on the ids `0..n`, with `0` the identity and
/// `table[g][h] = g * h`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    name: Option<String>,
}

/// JSON form: `{"order": n, "table": [[...], ...], "name": "..."}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CayleyTable {
    pub order: usize,
    pub table: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

impl FiniteGroup {
    /// Validates the table: shape, identity at id 0, Latin square rows and
    /// columns, and associativity on all triples.
    pub fn from_table(table: Vec<Vec<usize>>, name: Option<String>) -> Result<Self> {
        Self::from_table_bounded(table, name, MAX_ORDER)
    }

    pub fn from_table_bounded(
        table: Vec<Vec<usize>>,
        name: Option<String>,
        max_order: usize,
    ) -> Result<Self> {
        let n = table.len();
        let limit = max_order.min(MAX_ORDER);
        if n == 0 {
            return Err(Error::InvalidCayleyTable("empty table".into()));
        }
        if n > limit {
            return Err(Error::BudgetExceeded {
                what: "group order",
                requested: n as u64,
                limit: limit as u64,
            });
        }
        for (g, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidCayleyTable(format!(
                    "row {g} has length {}",
                    row.len()
                )));
            }
            if let Some(&bad) = row.iter().find(|&&v| v >= n) {
                return Err(Error::InvalidCayleyTable(format!(
                    "entry {bad} out of range"
                )));
            }
            if row[0] != g || table[0][g] != g {
                return Err(Error::InvalidCayleyTable("id 0 is not the identity".into()));
            }
        }
        for i in 0..n {
            let mut row_seen = vec![false; n];
            let mut col_seen = vec![false; n];
            for j in 0..n {
                row_seen[table[i][j]] = true;
                col_seen[table[j][i]] = true;
            }
            if row_seen.contains(&false) || col_seen.contains(&false) {
                return Err(Error::InvalidCayleyTable(format!(
                    "row or column {i} is not a permutation"
                )));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidCayleyTable(format!(
                            "not associative at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        let inverse = (0..n)
            .map(|g| (0..n).find(|&h| table[g][h] == 0).expect("Latin square"))
            .collect();
        Ok(FiniteGroup {
            table,
            inverse,
            name,
        })
    }

    pub fn from_cayley(c: CayleyTable) -> Result<Self> {
        if c.order != c.table.len() {
            return Err(Error::InvalidCayleyTable(format!(
                "order {} but {} rows",
                c.order,
                c.table.len()
            )));
        }
        FiniteGroup::from_table(c.table, c.name)
    }

    pub fn to_cayley(&self) -> CayleyTable {
        CayleyTable {
            order: self.order(),
            table: self.table.clone(),
            name: self.name.clone(),
        }
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.table[g][h]
    }

    pub fn inv(&self, g: usize) -> usize {
        self.inverse[g]
    }

    /// Mask of all elements.
    pub fn full_mask(&self) -> u64 {
        if self.order() == 64 {
            u64::MAX
        } else {
            (1u64 << self.order()) - 1
        }
    }

    /// The subgroup generated by the elements in `mask`.
    pub fn generated(&self, mask: u64) -> u64 {
        let gens: Vec<usize> = elements(mask).collect();
        let mut found = 1u64;
        let mut queue = vec![0usize];
        while let Some(x) = queue.pop() {
            for &g in &gens {
                let y = self.mul(x, g);
                if found & (1 << y) == 0 {
                    found |= 1 << y;
                    queue.push(y);
                }
            }
        }
        found
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    /// Whether `mask` is closed under products (hence a subgroup) and
    /// contains the identity.
    pub fn is_subgroup(&self, mask: u64) -> bool {
        if mask & 1 == 0 {
            return false;
        }
        elements(mask).all(|a| elements(mask).all(|b| mask & (1 << self.mul(a, b)) != 0))
    }

    /// Whether subgroup `h` is normalized by every element of `n`.
    pub fn normalizes(&self, n: u64, h: u64) -> bool {
        elements(n).all(|g| {
            let gi = self.inv(g);
            elements(h).all(|x| h & (1 << self.mul(self.mul(g, x), gi)) != 0)
        })
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }
}

/// Element ids present in a mask, ascending.
pub fn elements(mask: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| mask & (1u64 << i) != 0)
}

fn check_order(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::NonPositive {
            what: "group order",
        });
    }
    if n > MAX_ORDER {
        return Err(Error::BudgetExceeded {
            what: "group order",
            requested: n as u64,
            limit: MAX_ORDER as u64,
        });
    }
    Ok(())
}

pub fn cyclic(d: usize) -> Result<FiniteGroup> {
    check_order(d)?;
    let table = (0..d)
        .map(|a| (0..d).map(|b| (a + b) % d).collect())
        .collect();
    FiniteGroup::from_table(table, Some(format!("C{d}")))
}

/// The dihedral group of order `two_d`; `r^i s^j` has id `i + d j`.
pub fn dihedral(two_d: usize) -> Result<FiniteGroup> {
    if two_d < 2 || two_d % 2 != 0 {
        return Err(Error::HypothesisNotMet(format!(
            "dihedral order must be even and at least 2, got {two_d}"
        )));
    }
    check_order(two_d)?;
    let d = two_d / 2;
    let decode = |g: usize| (g % d, g / d);
    let table = (0..two_d)
        .map(|g| {
            (0..two_d)
                .map(|h| {
                    let ((i, a), (k, b)) = (decode(g), decode(h));
                    // r^i s^a r^k s^b = r^(i + (-1)^a k) s^(a + b)
                    let rot = if a == 0 { (i + k) % d } else { (i + d - k) % d };
                    rot + d * ((a + b) % 2)
                })
                .collect()
        })
        .collect();
    FiniteGroup::from_table(table, Some(format!("D{two_d}")))
}

/// `{+-1, +-i, +-j, +-k}` with ids `1, -1, i, -i, j, -j, k, -k`.
pub fn quaternion8() -> FiniteGroup {
    // unit products: index 0 = 1, 1 = i, 2 = j, 3 = k; value (sign, unit)
    const UNIT: [[(i8, usize); 4]; 4] = [
        [(1, 0), (1, 1), (1, 2), (1, 3)],
        [(1, 1), (-1, 0), (1, 3), (-1, 2)],
        [(1, 2), (-1, 3), (-1, 0), (1, 1)],
        [(1, 3), (1, 2), (-1, 1), (-1, 0)],
    ];
    let decode = |g: usize| (if g % 2 == 0 { 1i8 } else { -1 }, g / 2);
    let table = (0..8)
        .map(|g| {
            (0..8)
                .map(|h| {
                    let ((sg, ug), (sh, uh)) = (decode(g), decode(h));
                    let (s, u) = UNIT[ug][uh];
                    2 * u + usize::from(s * sg * sh < 0)
                })
                .collect()
        })
        .collect();
    FiniteGroup::from_table(table, Some("Q8".into())).expect("valid table")
}

/// The symmetric group on `n <= 4` points, permutations in lexicographic
/// order (identity first), with `(g h)(x) = g(h(x))`.
pub fn symmetric(n: usize) -> Result<FiniteGroup> {
    if n == 0 || n > 4 {
        return Err(Error::BudgetExceeded {
            what: "symmetric group degree",
            requested: n as u64,
            limit: 4,
        });
    }
    let mut perms: Vec<Vec<usize>> = Vec::new();
    permutations(&mut (0..n).collect(), 0, &mut perms);
    perms.sort();
    let index = |p: &Vec<usize>| perms.iter().position(|q| q == p).expect("closed");
    let table = perms
        .iter()
        .map(|g| {
            perms
                .iter()
                .map(|h| index(&(0..n).map(|x| g[h[x]]).collect()))
                .collect()
        })
        .collect();
    FiniteGroup::from_table(table, Some(format!("S{n}")))
}

fn permutations(cur: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == cur.len() {
        out.push(cur.clone());
        return;
    }
    for i in k..cur.len() {
        cur.swap(k, i);
        permutations(cur, k + 1, out);
        cur.swap(k, i);
    }
}

/// `G x H` with `(g, h)` at id `g |H| + h`.
pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Result<FiniteGroup> {
    let (a, b) = (g.order(), h.order());
    check_order(a * b)?;
    let table = (0..a * b)
        .map(|x| {
            (0..a * b)
                .map(|y| g.mul(x / b, y / b) * b + h.mul(x % b, y % b))
                .collect()
        })
        .collect();
    let name = match (g.name(), h.name()) {
        (Some(p), Some(q)) => Some(format!("{p}x{q}")),
        _ => None,
    };
    FiniteGroup::from_table(table, name)
}

/// `C_{d_1} x ... x C_{d_k}`.
pub fn abelian(ds: &[usize]) -> Result<FiniteGroup> {
    let mut acc = cyclic(1)?;
    for &d in ds {
        acc = direct_product(&acc, &cyclic(d)?)?;
    }
    let label: Vec<String> = ds.iter().map(|d| format!("C{d}")).collect();
    Ok(acc.with_name(label.join("x")))
}

/// Parses the preset names `c{d}`, `d{2d}`, `q8`, `s{n}`.
pub fn preset(name: &str) -> Result<FiniteGroup> {
    let lower = name.to_ascii_lowercase();
    let num = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| Error::Parse(format!("unknown group preset {name:?}")))
    };
    match lower.as_str() {
        "q8" => Ok(quaternion8()),
        _ if lower.starts_with('c') => cyclic(num(&lower[1..])?),
        _ if lower.starts_with('d') => dihedral(num(&lower[1..])?),
        _ if lower.starts_with('s') => symmetric(num(&lower[1..])?),
        _ => Err(Error::Parse(format!("unknown group preset {name:?}"))),
    }
}
