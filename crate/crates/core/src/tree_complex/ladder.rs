use std::collections::HashMap;

use serde::Serialize;

use super::collapse::CycleBasis;
use super::{CycleTable, TreeComplexData, TreeModel, TreePoset};
use crate::error::{Error, Result};
use crate::khovanov::Generator;

/// One rung `x_i -> y_i` of a ladder, inside the twisted unknot of `tree`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct LadderStep {
    pub tree: usize,
    pub word: String,
    pub x: Generator,
    pub y: Generator,
    /// Crossing changed from A to B on the way into `y_i`, from `x_{i-1}`.
    pub into_y: usize,
    /// Crossing changed from A to B by `x_i -> y_i` (live in `tree`).
    pub rung: usize,
}

/// A ladder of enhanced states from `Z_1` to `Z_2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Ladder {
    pub k: usize,
    pub steps: Vec<LadderStep>,
    /// Crossing changed by the last step into `Z_2`.
    pub last: usize,
    /// `(-1)^{k-1} <∂Z_1, y_1> prod <∂x_i, y_i> <∂x_i, y_{i+1}>`.
    pub contribution: i64,
    /// Whether every rung was a pivot of the collapse, with the same value
    /// as the original incidence. Always set when searching pivots only.
    pub matched: bool,
}

/// Search limits.
#[derive(Clone, Copy, Debug)]
pub struct LadderLimits {
    pub kmax: usize,
    /// Maximum number of search nodes; the search stops early beyond it.
    pub budget: usize,
    /// Follow only collapse pivots, weighted by their values when they were
    /// eliminated, and allow rungs inside the target's twisted unknot. A
    /// pivot may recur once a later pivot separates the two uses. With a
    /// large enough `kmax` the contributions sum to the induced entry.
    pub pivots_only: bool,
}

/// Result of a ladder search.
#[derive(Clone, Debug, Serialize)]
pub struct LadderReport {
    pub from: usize,
    pub to: usize,
    pub ladders: Vec<Ladder>,
    pub truncated: bool,
    /// Sum of contributions over ladders whose rungs were all collapse
    /// pivots.
    pub matched_sum: i64,
}

/// Ladders from `Z(t1)` to `Z(t2)` in the reduced complex with at most
/// `kmax` down-steps. Without `pivots_only`, rungs are original incidences
/// inside trees strictly between `t1` and `t2`.
pub fn ladders(
    model: &TreeModel,
    table: &CycleTable,
    poset: &TreePoset,
    collapsed: &TreeComplexData,
    (t1, t2): (usize, usize),
    limits: LadderLimits,
) -> Result<LadderReport> {
    if limits.kmax < 1 {
        return Err(Error::BadKmax);
    }
    if !table.is_reduced() {
        return Err(Error::Internal("ladders are searched in the reduced complex".into()));
    }
    let mut report = LadderReport {
        from: t1,
        to: t2,
        ladders: Vec::new(),
        truncated: false,
        matched_sum: 0,
    };
    if t1 == t2 || !poset.gt(t1, t2) {
        return Ok(report);
    }
    let basis = CycleBasis::new(model, table)?;
    let kh = &table.kh;
    let slot = |t: usize| kh.index_of(table.cycles[t].leading).expect("cycle in complex") as u32;
    let (z1, z2) = (slot(t1), slot(t2));
    let mut inn: HashMap<u32, Vec<(u32, i64)>> = HashMap::new();
    for (a, row) in basis.out.iter().enumerate() {
        for (&b, &v) in row {
            inn.entry(b).or_default().push((a as u32, v));
        }
    }
    for list in inn.values_mut() {
        list.sort_unstable();
    }
    let index = |g: Generator| kh.index_of(g).expect("pivot in complex") as u32;
    // Pivot partner, value and elimination time of each eliminated target.
    let pivot_of: HashMap<u32, (u32, i64, usize)> = collapsed
        .pivots
        .iter()
        .enumerate()
        .map(|(s, &(x, y, v))| (index(y), (index(x), v, s)))
        .collect();
    let is_pivot = |x: u32, y: u32| {
        pivot_of
            .get(&y)
            .is_some_and(|&(px, pv, _)| px == x && basis.out[x as usize].get(&y) == Some(&pv))
    };
    let between = |t: usize| t != t1 && poset.gt(t1, t) && (poset.gt(t, t2) || (limits.pivots_only && t == t2));
    let changed = |a: u32, b: u32| (basis.gens[a as usize].markers ^ basis.gens[b as usize].markers).trailing_zeros() as usize;

    struct Frame {
        x: u32,
        tree: usize,
        rungs: Vec<(u32, u32)>,
        weight: i64,
    }
    let mut stack = vec![Frame {
        x: z1,
        tree: t1,
        rungs: Vec::new(),
        weight: 1,
    }];
    let mut nodes = 0usize;
    while let Some(f) = stack.pop() {
        nodes += 1;
        if nodes > limits.budget {
            report.truncated = true;
            break;
        }
        let mut row: Vec<(u32, i64)> = basis.out[f.x as usize].iter().map(|(&b, &v)| (b, v)).collect();
        row.sort_unstable();
        for (y, a) in row.into_iter().rev() {
            if y == z2 {
                let k = f.rungs.len() + 1;
                let sign = if (k - 1) % 2 == 0 { 1 } else { -1 };
                let contribution = sign * f.weight * a;
                let matched = limits.pivots_only || f.rungs.iter().all(|&(x, y)| is_pivot(x, y));
                let mut prev = z1;
                let steps = f
                    .rungs
                    .iter()
                    .map(|&(x, y)| {
                        let tree = basis.owner[y as usize] as usize;
                        let step = LadderStep {
                            tree,
                            word: model.words[tree].to_string(),
                            x: basis.gens[x as usize],
                            y: basis.gens[y as usize],
                            into_y: changed(prev, y),
                            rung: changed(x, y),
                        };
                        prev = x;
                        step
                    })
                    .collect();
                if matched {
                    report.matched_sum += contribution;
                }
                report.ladders.push(Ladder {
                    k,
                    steps,
                    last: changed(f.x, z2),
                    contribution,
                    matched,
                });
                continue;
            }
            if f.rungs.len() + 1 >= limits.kmax || basis.cycle_at.contains_key(&y) {
                continue;
            }
            let ty = basis.owner[y as usize] as usize;
            if !limits.pivots_only && (!between(ty) || !(f.tree == t1 || poset.ge(f.tree, ty))) {
                continue;
            }
            if limits.pivots_only {
                let Some(&(x, pv, s)) = pivot_of.get(&y) else { continue };
                // Expanding the elimination step by step, a pivot may recur
                // only once a later pivot has been used in between.
                let time = |y: &u32| pivot_of[y].2;
                let recurs = f.rungs.iter().rev().map(|r| time(&r.1)).take_while(|&t| t <= s).any(|t| t == s);
                if recurs {
                    continue;
                }
                let mut rungs = f.rungs.clone();
                rungs.push((x, y));
                stack.push(Frame {
                    x,
                    tree: ty,
                    rungs,
                    weight: f.weight * a * pv,
                });
                continue;
            }
            for &(x, b) in inn.get(&y).map(|v| v.as_slice()).unwrap_or(&[]) {
                if basis.owner[x as usize] as usize != ty || basis.cycle_at.contains_key(&x) {
                    continue;
                }
                let mut rungs = f.rungs.clone();
                rungs.push((x, y));
                stack.push(Frame {
                    x,
                    tree: ty,
                    rungs,
                    weight: f.weight * a * b,
                });
            }
        }
    }
    report.ladders.sort_by(|a, b| (a.k, &a.steps).cmp(&(b.k, &b.steps)));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::tree_complex::{collapse_to_tree_complex, direct_incidence, poset};

    fn setup(name: &str) -> (TreeModel, CycleTable, TreePoset, TreeComplexData) {
        let m = TreeModel::from_diagram(&fixtures::diagram(name)).unwrap();
        let table = CycleTable::new(&m, true).unwrap();
        let p = poset(&m).unwrap();
        let c = collapse_to_tree_complex(&m, true).unwrap();
        (m, table, p, c)
    }

    const ONE: LadderLimits = LadderLimits {
        kmax: 1,
        budget: 100_000,
        pivots_only: false,
    };

    #[test]
    fn single_steps_are_direct_incidences() {
        let (m, table, p, c) = setup("5_2");
        for t1 in 0..m.tree_count() {
            for t2 in 0..m.tree_count() {
                let r = ladders(&m, &table, &p, &c, (t1, t2), ONE).unwrap();
                let direct = if p.gt(t1, t2) { direct_incidence(&table, t1, t2) } else { 0 };
                assert!(r.ladders.iter().all(|l| l.k == 1 && l.steps.is_empty()));
                assert_eq!(r.ladders.iter().map(|l| l.contribution).sum::<i64>(), direct);
            }
        }
    }

    #[test]
    fn equal_trees_and_zero_kmax() {
        let (m, table, p, c) = setup("4_1");
        assert!(ladders(&m, &table, &p, &c, (2, 2), ONE).unwrap().ladders.is_empty());
        let zero = LadderLimits { kmax: 0, ..ONE };
        assert!(matches!(ladders(&m, &table, &p, &c, (4, 0), zero), Err(Error::BadKmax)));
    }

    #[test]
    fn pivot_ladders_sum_to_collapsed_entries() {
        let limits = LadderLimits {
            kmax: 40,
            budget: 5_000_000,
            pivots_only: true,
        };
        for name in ["6_2", "7_4", "8_19"] {
            let (m, table, p, c) = setup(name);
            for &(a, b, v) in &c.differential {
                let r = ladders(&m, &table, &p, &c, (a, b), limits).unwrap();
                assert!(!r.truncated);
                assert_eq!(r.matched_sum, v, "{name}: {a} -> {b}");
            }
        }
    }
}
