use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use super::{Generator, KhComplex};
use crate::algebra::{elementary_divisors, normalize_torsion, Divisors, SparseMatrix};
use crate::error::{Error, Result};
use crate::poly::PolyQ;

/// A finitely generated abelian group: free rank plus torsion coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Group {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl Group {
    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    fn normalized(&self) -> Group {
        Group {
            rank: self.rank,
            torsion: normalize_torsion(&self.torsion),
        }
    }
}

/// Groups indexed by a bidegree; zero groups are never stored.
#[derive(Clone, Debug, Default)]
pub struct BigradedGroups {
    groups: BTreeMap<(i64, i64), Group>,
}

impl PartialEq for BigradedGroups {
    fn eq(&self, other: &Self) -> bool {
        self.groups.len() == other.groups.len()
            && self
                .groups
                .iter()
                .zip(&other.groups)
                .all(|((a, x), (b, y))| a == b && x.normalized() == y.normalized())
    }
}

impl Eq for BigradedGroups {}

impl BigradedGroups {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_map(groups: BTreeMap<(i64, i64), Group>) -> Self {
        let mut out = BigradedGroups::new();
        for (k, g) in groups {
            out.insert(k, g);
        }
        out
    }

    pub fn insert(&mut self, key: (i64, i64), g: Group) {
        if g.is_zero() {
            self.groups.remove(&key);
        } else {
            self.groups.insert(key, g.normalized());
        }
    }

    pub fn get(&self, key: (i64, i64)) -> Group {
        self.groups.get(&key).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(i64, i64), &Group)> {
        self.groups.iter()
    }

    pub fn total_rank(&self) -> usize {
        self.groups.values().map(|g| g.rank).sum()
    }

    pub fn ranks(&self) -> BTreeMap<(i64, i64), usize> {
        self.groups.iter().filter(|(_, g)| g.rank > 0).map(|(k, g)| (*k, g.rank)).collect()
    }

    /// Relabels bidegrees; the map must be injective on the support.
    pub fn regrade(&self, f: impl Fn((i64, i64)) -> (i64, i64)) -> BigradedGroups {
        let mut out = BigradedGroups::new();
        for (k, g) in &self.groups {
            out.insert(f(*k), g.clone());
        }
        out
    }

    /// `sum (-1)^i q^j rank H^{i,j}`.
    pub fn euler_characteristic(&self) -> PolyQ {
        let mut p = PolyQ::zero();
        for (&(i, j), g) in &self.groups {
            let s: i64 = if i.rem_euclid(2) == 0 { 1 } else { -1 };
            p.add_term(j, BigInt::from(s * g.rank as i64));
        }
        p
    }

    /// Poincaré table: one line per nonzero group.
    pub fn to_table(&self) -> String {
        let mut s = String::new();
        for (&(i, j), g) in &self.groups {
            let _ = write!(s, "{i:>4} {j:>4}  Z^{}", g.rank);
            for t in &g.torsion {
                let _ = write!(s, " + Z/{t}");
            }
            s.push('\n');
        }
        s
    }
}

#[derive(Serialize)]
struct Record<'a> {
    i: i64,
    j: i64,
    rank: usize,
    torsion: Vec<&'a BigInt>,
}

impl Serialize for BigradedGroups {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.groups.len()))?;
        for (&(i, j), g) in &self.groups {
            seq.serialize_element(&Record {
                i,
                j,
                rank: g.rank,
                torsion: g.torsion.iter().collect(),
            })?;
        }
        seq.end()
    }
}

/// Homology of a complex split into blocks, where the differential maps
/// block `k` into block `next(k)`. `maps[k]` has its rows indexed by the
/// target block and its columns by block `k`; missing maps are zero.
pub fn block_homology<K: Ord + Copy + Send + Sync>(
    dims: &BTreeMap<K, usize>,
    maps: &BTreeMap<K, SparseMatrix>,
    prev: impl Fn(K) -> K,
) -> Result<BTreeMap<K, Group>> {
    let divisors: BTreeMap<K, Divisors> = maps
        .par_iter()
        .map(|(k, m)| (*k, elementary_divisors(m)))
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    let mut out = BTreeMap::new();
    for (&k, &n) in dims {
        let outgoing = divisors.get(&k).map_or(0, |d| d.rank);
        let incoming = divisors.get(&prev(k));
        let rank = n
            .checked_sub(outgoing + incoming.map_or(0, |d| d.rank))
            .ok_or_else(|| Error::Internal("d∘d ≠ 0: ranks exceed dimension".into()))?;
        let g = Group {
            rank,
            torsion: incoming.map(|d| normalize_torsion(&d.torsion)).unwrap_or_default(),
        };
        if !g.is_zero() {
            out.insert(k, g);
        }
    }
    Ok(out)
}

/// Homology of a complex of bigraded generators whose differential has
/// bidegree `(1, 0)`.
pub fn bigraded_homology<G>(blocks: &BTreeMap<(i64, i64), Vec<G>>, d: impl Fn(G) -> Vec<(G, i64)> + Sync) -> Result<BigradedGroups>
where
    G: Copy + Eq + std::hash::Hash + Send + Sync,
{
    let index: HashMap<G, usize> = blocks.values().flat_map(|gs| gs.iter().enumerate().map(|(k, g)| (*g, k))).collect();
    let keys: Vec<(i64, i64)> = blocks.keys().copied().collect();
    let maps: Vec<((i64, i64), SparseMatrix)> = keys
        .par_iter()
        .filter_map(|&(i, j)| {
            let dst = blocks.get(&(i + 1, j))?;
            let src = &blocks[&(i, j)];
            let mut m = SparseMatrix::new(dst.len(), src.len());
            for (col, &g) in src.iter().enumerate() {
                for (h, v) in d(g) {
                    match index.get(&h) {
                        Some(&row) => m.push(row, col, v),
                        None => return Some(Err(Error::Internal("differential leaves the complex".into()))),
                    }
                }
            }
            Some(Ok(((i, j), m)))
        })
        .collect::<Result<_>>()?;
    let dims = blocks.iter().map(|(k, v)| (*k, v.len())).collect();
    let groups = block_homology(&dims, &maps.into_iter().collect(), |(i, j)| (i - 1, j))?;
    Ok(BigradedGroups::from_map(groups))
}

/// Integral homology of a Khovanov complex, by bidegree.
pub fn homology(c: &KhComplex) -> Result<BigradedGroups> {
    bigraded_homology(&c.by_bidegree(), |g: Generator| c.differential(g))
}

/// Checks `d∘d = 0` on every generator.
pub fn check_d_squared(c: &KhComplex) -> bool {
    (0..c.generator_count()).into_par_iter().all(|k| {
        let mut acc: HashMap<Generator, i64> = HashMap::new();
        for (h, v) in c.differential(c.generator(k)) {
            for (x, w) in c.differential(h) {
                *acc.entry(x).or_insert(0) += v * w;
            }
        }
        acc.values().all(|&v| v == 0)
    })
}
