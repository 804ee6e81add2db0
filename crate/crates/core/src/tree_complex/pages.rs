use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use num_traits::Zero;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use super::collapse::collapse_with_table;
use super::{direct_incidences, poset, CycleTable, TreeComplexData, TreeModel, TreePoset};
use crate::algebra::{q, rank_q, QMatrix, SparseMatrix};
use crate::error::Result;
use crate::khovanov::{bigraded_homology, block_homology, BigradedGroups, Generator, Group};

/// `(p, u, v)`: filtration level and tree bigrading.
pub type PageKey = (i64, i64, i64);

/// One page of the spanning-tree spectral sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Page {
    pub r: usize,
    pub groups: BTreeMap<PageKey, Group>,
    /// Torsion is tracked on `E_0`, `E_1` and `E_2`; later pages are ranks
    /// over the rationals.
    pub integral: bool,
    /// `d_1` as `(from tree, to tree, value)`, on `E_1` only.
    pub d1: Option<Vec<(usize, usize, i64)>>,
    /// Set when `r` exceeds the crossing number, where the sequence has
    /// stabilized.
    pub stabilized: bool,
}

impl Page {
    pub fn total_rank(&self) -> usize {
        self.groups.values().map(|g| g.rank).sum()
    }

    /// Ranks summed over filtration levels, keyed by `(u, v)`.
    pub fn ranks_uv(&self) -> BTreeMap<(i64, i64), usize> {
        let mut out = BTreeMap::new();
        for (&(_, u, v), g) in &self.groups {
            if g.rank > 0 {
                *out.entry((u, v)).or_insert(0) += g.rank;
            }
        }
        out
    }

    pub fn ranks(&self) -> BTreeMap<PageKey, usize> {
        self.groups.iter().filter(|(_, g)| g.rank > 0).map(|(k, g)| (*k, g.rank)).collect()
    }
}

#[derive(Serialize)]
struct Record<'a> {
    p: i64,
    u: i64,
    v: i64,
    rank: usize,
    torsion: &'a [num_bigint::BigInt],
}

/// Serializes groups keyed by `(p, u, v)` as a list of records.
pub struct PageGroups<'a>(pub &'a BTreeMap<PageKey, Group>);

impl Serialize for PageGroups<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for (&(p, u, v), g) in self.0 {
            seq.serialize_element(&Record {
                p,
                u,
                v,
                rank: g.rank,
                torsion: &g.torsion,
            })?;
        }
        seq.end()
    }
}

impl Serialize for Page {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Out<'a> {
            r: usize,
            integral: bool,
            stabilized: bool,
            groups: PageGroups<'a>,
            #[serde(skip_serializing_if = "Option::is_none")]
            d1: Option<&'a [(usize, usize, i64)]>,
        }
        Out {
            r: self.r,
            integral: self.integral,
            stabilized: self.stabilized,
            groups: PageGroups(&self.groups),
            d1: self.d1.as_deref(),
        }
        .serialize(s)
    }
}

/// `d_1`: direct incidences between trees one filtration level apart.
pub fn d1_matrix(table: &CycleTable, poset: &TreePoset) -> Vec<(usize, usize, i64)> {
    direct_incidences(table)
        .into_iter()
        .filter(|h| poset.level(h.to) == poset.level(h.from) + 1)
        .map(|h| (h.from, h.to, h.value))
        .collect()
}

fn key(model: &TreeModel, poset: &TreePoset, t: usize) -> PageKey {
    let (u, v) = model.grading(t);
    (poset.level(t) as i64, u, v)
}

/// `E_2 = H(E_1, d_1)` over the integers.
pub fn e2_integral(model: &TreeModel) -> Result<BTreeMap<PageKey, Group>> {
    let table = CycleTable::new(model, true)?;
    let poset = poset(model)?;
    e2_from(model, &poset, &d1_matrix(&table, &poset))
}

fn e2_from(model: &TreeModel, poset: &TreePoset, d1: &[(usize, usize, i64)]) -> Result<BTreeMap<PageKey, Group>> {
    let mut blocks: BTreeMap<PageKey, Vec<usize>> = BTreeMap::new();
    for t in 0..model.tree_count() {
        blocks.entry(key(model, poset, t)).or_default().push(t);
    }
    let pos: HashMap<usize, usize> = blocks.values().flat_map(|ts| ts.iter().enumerate().map(|(k, &t)| (t, k))).collect();
    let mut maps: BTreeMap<PageKey, SparseMatrix> = BTreeMap::new();
    for &(a, b, v) in d1 {
        let (ka, kb) = (key(model, poset, a), key(model, poset, b));
        maps.entry(ka)
            .or_insert_with(|| SparseMatrix::new(blocks[&kb].len(), blocks[&ka].len()))
            .push(pos[&b], pos[&a], v);
    }
    let dims = blocks.iter().map(|(k, ts)| (*k, ts.len())).collect();
    block_homology(&dims, &maps, |(p, u, v)| (p - 1, u + 1, v + 1))
}

/// Everything needed to compute pages of one diagram.
pub struct SpectralSequence<'m> {
    model: &'m TreeModel,
    pub poset: TreePoset,
    pub table: CycleTable,
    pub collapsed: TreeComplexData,
}

impl<'m> SpectralSequence<'m> {
    pub fn new(model: &'m TreeModel) -> Result<Self> {
        let table = CycleTable::new(model, true)?;
        let poset = poset(model)?;
        let collapsed = collapse_with_table(model, &table)?;
        Ok(SpectralSequence {
            model,
            poset,
            table,
            collapsed,
        })
    }

    pub fn page(&self, r: usize) -> Result<Page> {
        let stabilized = r > self.model.crossing_count();
        let (groups, integral, d1) = match r {
            0 => (self.e0(), true, None),
            1 => (self.e1()?, true, Some(d1_matrix(&self.table, &self.poset))),
            2 => (e2_from(self.model, &self.poset, &d1_matrix(&self.table, &self.poset))?, true, None),
            _ => (self.rational_page(r), false, None),
        };
        Ok(Page {
            r,
            groups,
            integral,
            d1,
            stabilized,
        })
    }

    fn owner_key(&self, owners: &[u32], g: Generator) -> PageKey {
        let t = owners[g.markers as usize] as usize;
        let (u, v) = self
            .model
            .grading_shift()
            .to_tree(self.table.kh.bidegree(g))
            .expect("tree gradings are integral");
        (self.poset.level(t) as i64, u, v)
    }

    /// Chain groups of the associated graded complex.
    fn e0(&self) -> BTreeMap<PageKey, Group> {
        let owners = self.model.state_owners().expect("checked when collapsing");
        let mut out: BTreeMap<PageKey, Group> = BTreeMap::new();
        for k in 0..self.table.kh.generator_count() {
            out.entry(self.owner_key(&owners, self.table.kh.generator(k))).or_default().rank += 1;
        }
        out
    }

    /// Homology of each twisted unknot's subcomplex under `d_0`.
    fn e1(&self) -> Result<BTreeMap<PageKey, Group>> {
        let owners = self.model.state_owners()?;
        let kh = &self.table.kh;
        let mut per_tree: Vec<BTreeMap<(i64, i64), Vec<Generator>>> = vec![BTreeMap::new(); self.model.tree_count()];
        for k in 0..kh.generator_count() {
            let g = kh.generator(k);
            per_tree[owners[g.markers as usize] as usize].entry(kh.bidegree(g)).or_default().push(g);
        }
        let mut out: BTreeMap<PageKey, Group> = BTreeMap::new();
        for (t, blocks) in per_tree.iter().enumerate() {
            let live = self.model.live_mask(t);
            let h: BigradedGroups = bigraded_homology(blocks, |g| kh.differential_at(g, live))?;
            for (&ij, g) in h.iter() {
                let (u, v) = self.model.grading_shift().to_tree(ij).expect("tree gradings are integral");
                let e = out.entry((self.poset.level(t) as i64, u, v)).or_default();
                e.rank += g.rank;
                e.torsion.extend(g.torsion.iter().cloned());
            }
        }
        Ok(out)
    }

    /// `E_r` over the rationals from the collapsed complex, by
    /// `E_r^p = Z_r^p / (Z_{r-1}^{p+1} + d Z_{r-1}^{p-r+1})` with
    /// `Z_r^p = {x in F^p : dx in F^{p+r}}`.
    pub fn rational_page(&self, r: usize) -> BTreeMap<PageKey, Group> {
        let r = r as i64;
        let c = &self.collapsed;
        let level = |k: usize| self.poset.level(c.generators[k].tree) as i64;
        let mut by_uv: BTreeMap<(i64, i64), Vec<usize>> = BTreeMap::new();
        for (k, g) in c.generators.iter().enumerate() {
            by_uv.entry((g.u, g.v)).or_default().push(k);
        }
        let mut d: HashMap<usize, Vec<(usize, i64)>> = HashMap::new();
        for &(a, b, v) in &c.differential {
            d.entry(a).or_default().push((b, v));
        }
        let empty: Vec<usize> = Vec::new();
        let no_edges: Vec<(usize, i64)> = Vec::new();
        // Z_s^p at (u, v), as vectors over all generators of that bidegree.
        let cycles = |(u, v): (i64, i64), p: i64, s: i64| -> Vec<Vec<BigRational>> {
            let src = by_uv.get(&(u, v)).unwrap_or(&empty);
            let cols: Vec<usize> = (0..src.len()).filter(|&k| level(src[k]) >= p).collect();
            let dst = by_uv.get(&(u - 1, v - 1)).unwrap_or(&empty);
            let rows: Vec<usize> = (0..dst.len()).filter(|&k| level(dst[k]) < p + s).collect();
            let row_of: HashMap<usize, usize> = rows.iter().enumerate().map(|(i, &k)| (dst[k], i)).collect();
            let mut m = QMatrix::zeros(rows.len(), cols.len());
            for (j, &k) in cols.iter().enumerate() {
                for &(b, x) in d.get(&src[k]).unwrap_or(&no_edges) {
                    if let Some(&i) = row_of.get(&b) {
                        m.rows[i][j] += q(x);
                    }
                }
            }
            m.kernel()
                .into_iter()
                .map(|kv| {
                    let mut full = vec![BigRational::zero(); src.len()];
                    for (j, &k) in cols.iter().enumerate() {
                        full[k] = kv[j].clone();
                    }
                    full
                })
                .collect()
        };
        let apply_d = |(u, v): (i64, i64), x: &[BigRational]| -> Vec<BigRational> {
            let src = &by_uv[&(u, v)];
            let dst = by_uv.get(&(u - 1, v - 1)).unwrap_or(&empty);
            let pos: HashMap<usize, usize> = dst.iter().enumerate().map(|(i, &k)| (k, i)).collect();
            let mut out = vec![BigRational::zero(); dst.len()];
            for (j, xj) in x.iter().enumerate() {
                if xj.is_zero() {
                    continue;
                }
                for &(b, val) in d.get(&src[j]).unwrap_or(&no_edges) {
                    out[pos[&b]] += xj * q(val);
                }
            }
            out
        };
        let mut out = BTreeMap::new();
        let max_p = self.poset.max_level() as i64;
        for (&(u, v), gens) in &by_uv {
            for p in 1..=max_p {
                if !gens.iter().any(|&k| level(k) >= p) {
                    continue;
                }
                let z = cycles((u, v), p, r).len();
                let mut b: Vec<Vec<BigRational>> = cycles((u, v), p + 1, r - 1);
                if by_uv.contains_key(&(u + 1, v + 1)) {
                    for x in cycles((u + 1, v + 1), p - r + 1, r - 1) {
                        b.push(apply_d((u + 1, v + 1), &x));
                    }
                }
                let rank = z - rank_q(gens.len(), b);
                if rank > 0 {
                    out.insert((p, u, v), Group { rank, torsion: Vec::new() });
                }
            }
        }
        out
    }
}

/// Page `r` of the spectral sequence of the reduced complex.
pub fn spectral_page(model: &TreeModel, r: usize) -> Result<Page> {
    SpectralSequence::new(model)?.page(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn figure8_pages() {
        let model = TreeModel::from_graph(&fixtures::figure8_graph()).unwrap();
        let ss = SpectralSequence::new(&model).unwrap();
        let e1 = ss.page(1).unwrap();
        assert_eq!(e1.total_rank(), 5);
        assert!(e1.groups.values().all(|g| g.torsion.is_empty()));
        let uv: Vec<(i64, i64)> = (0..5).map(|t| model.grading(t)).collect();
        for (u, v) in uv {
            assert!(e1.ranks_uv().contains_key(&(u, v)));
        }
        assert_eq!(e1.d1.as_deref(), Some(&[][..]));
        let e2 = ss.page(2).unwrap();
        assert_eq!(e2.ranks(), e1.ranks());
    }

    #[test]
    fn rational_pages_agree_with_integral_ones_where_both_exist() {
        for name in ["5_2", "8_19", "8_20", "9_42"] {
            let model = TreeModel::from_diagram(&fixtures::diagram(name)).unwrap();
            let ss = SpectralSequence::new(&model).unwrap();
            let e1 = ss.page(1).unwrap();
            let trees: BTreeMap<PageKey, usize> = (0..model.tree_count()).fold(BTreeMap::new(), |mut m, t| {
                *m.entry(key(&model, &ss.poset, t)).or_insert(0) += 1;
                m
            });
            assert_eq!(e1.ranks(), trees, "{name}");
            let to_ranks =
                |m: BTreeMap<PageKey, Group>| -> BTreeMap<PageKey, usize> { m.into_iter().filter(|(_, g)| g.rank > 0).map(|(k, g)| (k, g.rank)).collect() };
            assert_eq!(to_ranks(ss.rational_page(1)), trees, "{name}");
            assert_eq!(to_ranks(ss.rational_page(2)), ss.page(2).unwrap().ranks(), "{name}");
        }
    }
}
