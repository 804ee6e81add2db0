use std::collections::{BTreeMap, HashMap, HashSet};

use rayon::prelude::*;
use serde::Serialize;

use super::{poset, CycleTable, GradingShift, TreeModel, Variant};
use crate::error::{Error, Result};
use crate::khovanov::{bigraded_homology, BigradedGroups, Generator};

/// A generator of the spanning-tree complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TreeGenerator {
    pub tree: usize,
    pub variant: Variant,
    pub u: i64,
    pub v: i64,
}

/// The complex left after collapsing every twisted unknot onto its
/// fundamental cycle.
#[derive(Clone, Debug, Serialize)]
pub struct TreeComplexData {
    pub reduced: bool,
    pub generators: Vec<TreeGenerator>,
    /// Nonzero entries `(from, to, value)` of the induced differential,
    /// which has bidegree `(-1, -1)` in `(u, v)`.
    pub differential: Vec<(usize, usize, i64)>,
    /// Eliminated pairs `(x, y, <∂x, y>)` in elimination order.
    #[serde(skip)]
    pub pivots: Vec<(Generator, Generator, i64)>,
    #[serde(skip)]
    pub shift: GradingShift,
}

impl TreeComplexData {
    pub fn entry(&self, from: usize, to: usize) -> i64 {
        self.differential.iter().find(|e| e.0 == from && e.1 == to).map_or(0, |e| e.2)
    }

    /// Index of the generator for `(tree, variant)`.
    pub fn index_of(&self, tree: usize, variant: Variant) -> usize {
        if self.reduced {
            tree
        } else {
            2 * tree + usize::from(variant == Variant::Minus)
        }
    }

    /// Homology, regraded to Khovanov bidegrees `(i, j)`.
    pub fn homology(&self) -> Result<BigradedGroups> {
        let mut adj: Vec<Vec<(usize, i64)>> = vec![Vec::new(); self.generators.len()];
        for &(a, b, v) in &self.differential {
            adj[a].push((b, v));
        }
        let mut blocks: BTreeMap<(i64, i64), Vec<usize>> = BTreeMap::new();
        for (k, g) in self.generators.iter().enumerate() {
            blocks.entry(self.shift.to_kh((g.u, g.v))).or_default().push(k);
        }
        bigraded_homology(&blocks, |k| adj[k].clone())
    }

    /// `∂∘∂ = 0` on the induced differential.
    pub fn is_complex(&self) -> bool {
        let mut adj: Vec<Vec<(usize, i64)>> = vec![Vec::new(); self.generators.len()];
        for &(a, b, v) in &self.differential {
            adj[a].push((b, v));
        }
        (0..adj.len()).all(|a| {
            let mut acc: HashMap<usize, i64> = HashMap::new();
            for &(b, x) in &adj[a] {
                for &(c, y) in &adj[b] {
                    *acc.entry(c).or_insert(0) += x * y;
                }
            }
            acc.values().all(|&v| v == 0)
        })
    }
}

/// Sparse matrix under Gaussian elimination: `out[a][b] = <∂a, b>`.
struct Elimination {
    out: Vec<HashMap<u32, i64>>,
    inn: Vec<HashSet<u32>>,
    alive: Vec<bool>,
}

impl Elimination {
    /// Eliminates the pair `x -> y`, returning the number of updated
    /// entries that join two states of one twisted unknot other than
    /// `current`.
    fn eliminate(&mut self, x: u32, y: u32, owner: &[u32], current: u32) -> Result<usize> {
        let pv = self.out[x as usize][&y];
        let col: Vec<(u32, i64)> = self.inn[y as usize]
            .iter()
            .filter(|&&a| a != x)
            .map(|&a| (a, self.out[a as usize][&y]))
            .collect();
        let row: Vec<(u32, i64)> = self.out[x as usize].iter().filter(|(&b, _)| b != y).map(|(&b, &v)| (b, v)).collect();
        let mut foreign = 0;
        for &(a, ay) in &col {
            for &(b, xb) in &row {
                let delta = ay
                    .checked_mul(xb)
                    .and_then(|p| p.checked_mul(pv))
                    .ok_or_else(|| Error::Internal("collapse coefficient overflow".into()))?;
                let (oa, ob) = (owner[a as usize], owner[b as usize]);
                if oa == ob && oa != current {
                    foreign += 1;
                }
                let e = self.out[a as usize].entry(b).or_insert(0);
                *e = e.checked_sub(delta).ok_or_else(|| Error::Internal("collapse coefficient overflow".into()))?;
                if *e == 0 {
                    self.out[a as usize].remove(&b);
                    self.inn[b as usize].remove(&a);
                } else {
                    self.inn[b as usize].insert(a);
                }
            }
        }
        for z in [x, y] {
            let outs: Vec<u32> = self.out[z as usize].keys().copied().collect();
            for b in outs {
                self.inn[b as usize].remove(&z);
            }
            let ins: Vec<u32> = self.inn[z as usize].iter().copied().collect();
            for a in ins {
                self.out[a as usize].remove(&z);
            }
            self.out[z as usize].clear();
            self.inn[z as usize].clear();
            self.alive[z as usize] = false;
        }
        Ok(foreign)
    }
}

/// Collapses each twisted unknot onto its fundamental cycle(s), the
/// minimal tree first, and records the induced differential.
pub fn collapse_to_tree_complex(model: &TreeModel, reduced: bool) -> Result<TreeComplexData> {
    let table = CycleTable::new(model, reduced)?;
    collapse_with_table(model, &table)
}

/// The differential of the whole complex in the basis where each
/// fundamental cycle replaces its leading summand.
pub(crate) struct CycleBasis {
    pub gens: Vec<Generator>,
    /// Tree owning each generator.
    pub owner: Vec<u32>,
    /// Generator index of each cycle's slot, to the cycle's position in the table.
    pub cycle_at: HashMap<u32, usize>,
    pub out: Vec<HashMap<u32, i64>>,
    pub generators: Vec<TreeGenerator>,
}

impl CycleBasis {
    pub fn new(model: &TreeModel, table: &CycleTable) -> Result<Self> {
        let kh = &table.kh;
        let shift = model.grading_shift();
        let state_owner = model.state_owners()?;
        let count = kh.generator_count();
        let gens: Vec<Generator> = (0..count).map(|k| kh.generator(k)).collect();
        let owner: Vec<u32> = gens.iter().map(|g| state_owner[g.markers as usize]).collect();
        let mut cycle_at: HashMap<u32, usize> = HashMap::new();
        let generators: Vec<TreeGenerator> = table
            .cycles
            .iter()
            .map(|z| {
                let (u, v) = model.grading(z.tree);
                let (u, v) = if z.variant == Variant::Plus { (u, v) } else { (u + 2, v + 1) };
                TreeGenerator {
                    tree: z.tree,
                    variant: z.variant,
                    u,
                    v,
                }
            })
            .collect();
        for (k, z) in table.cycles.iter().enumerate() {
            let idx = kh.index_of(z.leading).ok_or_else(|| Error::Internal("cycle outside the complex".into()))?;
            cycle_at.insert(idx as u32, k);
            if kh.bidegree(z.leading) != shift.to_kh((generators[k].u, generators[k].v)) {
                return Err(Error::Internal(format!("tree {}: cycle bidegree disagrees with (u, v)", z.tree)));
            }
            for (h, _) in &z.terms {
                if *h != z.leading && table.by_leading.contains_key(h) {
                    return Err(Error::Internal("a cycle contains another cycle's leading summand".into()));
                }
            }
        }
        let out: Vec<HashMap<u32, i64>> = (0..count)
            .into_par_iter()
            .map(|k| {
                let w: HashMap<Generator, i64> = match cycle_at.get(&(k as u32)) {
                    Some(&c) => table.boundary(&table.cycles[c].terms),
                    None => {
                        let mut w = HashMap::new();
                        for (h, v) in kh.differential(gens[k]) {
                            *w.entry(h).or_insert(0) += v;
                        }
                        w
                    }
                };
                table
                    .to_cycle_basis(w)
                    .into_iter()
                    .map(|(h, v)| (kh.index_of(h).expect("differential stays in the complex") as u32, v))
                    .collect()
            })
            .collect();
        Ok(CycleBasis {
            gens,
            owner,
            cycle_at,
            out,
            generators,
        })
    }
}

pub(crate) fn collapse_with_table(model: &TreeModel, table: &CycleTable) -> Result<TreeComplexData> {
    let reduced = table.is_reduced();
    let shift = model.grading_shift();
    let CycleBasis {
        gens,
        owner,
        cycle_at,
        out,
        generators,
    } = CycleBasis::new(model, table)?;
    let count = gens.len();
    let mut inn: Vec<HashSet<u32>> = vec![HashSet::new(); count];
    for (a, row) in out.iter().enumerate() {
        for &b in row.keys() {
            inn[b as usize].insert(a as u32);
        }
    }
    let mut elim = Elimination {
        out,
        inn,
        alive: vec![true; count],
    };

    let mut members: Vec<Vec<u32>> = vec![Vec::new(); model.tree_count()];
    for k in 0..count {
        if !cycle_at.contains_key(&(k as u32)) {
            members[owner[k] as usize].push(k as u32);
        }
    }
    let poset = poset(model)?;
    let mut order: Vec<usize> = (0..model.tree_count()).collect();
    order.sort_by_key(|&t| (std::cmp::Reverse(poset.level(t)), t));

    let mut pivots = Vec::new();
    for t in order {
        let mut left: Vec<u32> = std::mem::take(&mut members[t]);
        while !left.is_empty() {
            let mut progress = false;
            for &x in &left {
                if !elim.alive[x as usize] {
                    continue;
                }
                let y = elim.out[x as usize]
                    .iter()
                    .filter(|(&y, &v)| v.abs() == 1 && owner[y as usize] == t as u32 && !cycle_at.contains_key(&y))
                    .map(|(&y, _)| y)
                    .min();
                if let Some(y) = y {
                    let pv = elim.out[x as usize][&y];
                    pivots.push((gens[x as usize], gens[y as usize], pv));
                    let foreign = elim.eliminate(x, y, &owner, t as u32)?;
                    if foreign > 0 {
                        return Err(Error::Internal(format!(
                            "collapsing tree {t} changed {foreign} incidences inside other twisted unknots"
                        )));
                    }
                    progress = true;
                }
            }
            left.retain(|&x| elim.alive[x as usize]);
            if !progress && !left.is_empty() {
                return Err(Error::Internal(format!("tree {t}: no unit pivot among {} remaining states", left.len())));
            }
        }
    }

    let index_of_cycle: HashMap<u32, usize> = cycle_at;
    let mut differential = Vec::new();
    for (&idx, &k) in &index_of_cycle {
        for (&b, &v) in &elim.out[idx as usize] {
            let target = *index_of_cycle
                .get(&b)
                .ok_or_else(|| Error::Internal("collapse left a non-cycle generator".into()))?;
            let (ga, gb) = (generators[k], generators[target]);
            if (gb.u, gb.v) != (ga.u - 1, ga.v - 1) {
                return Err(Error::Internal("induced differential has the wrong bidegree".into()));
            }
            differential.push((k, target, v));
        }
    }
    differential.sort_unstable();
    Ok(TreeComplexData {
        reduced,
        generators,
        differential,
        pivots,
        shift,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::khovanov::{homology, KhComplex};

    #[test]
    fn round_unknot_collapses_to_one_generator() {
        let model = TreeModel::from_diagram(&crate::diagram::Diagram::round_unknot()).unwrap();
        let c = collapse_to_tree_complex(&model, true).unwrap();
        assert_eq!(c.generators.len(), 1);
        assert!(c.differential.is_empty());
    }

    #[test]
    fn figure8_reduced_has_zero_differential() {
        let model = TreeModel::from_graph(&fixtures::figure8_graph()).unwrap();
        let c = collapse_to_tree_complex(&model, true).unwrap();
        assert_eq!(c.generators.len(), 5);
        assert!(c.differential.is_empty());
        assert_eq!(c.homology().unwrap().total_rank(), 5);
    }

    #[test]
    fn small_knots_match_khovanov_homology() {
        for name in ["3_1", "trefoil_right", "4_1", "5_2", "6_2", "7_4"] {
            let d = fixtures::diagram(name);
            let model = TreeModel::from_diagram(&d).unwrap();
            for reduced in [true, false] {
                let c = collapse_to_tree_complex(&model, reduced).unwrap();
                assert!(c.is_complex());
                assert_eq!(c.homology().unwrap(), homology(&KhComplex::new(&d, reduced)).unwrap(), "{name} {reduced}");
            }
        }
    }
}
