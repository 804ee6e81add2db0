use serde::Serialize;

use super::TreeModel;
use crate::error::{Error, Result};

/// Spanning trees ordered by their partial smoothings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreePoset {
    n: usize,
    /// `greater[a]` holds bit `b` when `a > b`.
    greater: Vec<Vec<u64>>,
    /// Longest chain from the maximum down to the tree, counting both ends.
    levels: Vec<usize>,
}

impl TreePoset {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn gt(&self, a: usize, b: usize) -> bool {
        self.greater[a][b / 64] >> (b % 64) & 1 == 1
    }

    pub fn ge(&self, a: usize, b: usize) -> bool {
        a == b || self.gt(a, b)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.ge(a, b) || self.gt(b, a)
    }

    pub fn level(&self, t: usize) -> usize {
        self.levels[t]
    }

    pub fn levels(&self) -> &[usize] {
        &self.levels
    }

    pub fn max_level(&self) -> usize {
        self.levels.iter().copied().max().unwrap_or(0)
    }

    pub fn maximum(&self) -> Option<usize> {
        (0..self.n).find(|&a| (0..self.n).all(|b| self.ge(a, b)))
    }

    pub fn minimum(&self) -> Option<usize> {
        (0..self.n).find(|&a| (0..self.n).all(|b| self.ge(b, a)))
    }

    /// Trees directly below `a` (no tree strictly between).
    pub fn lower_covers(&self, a: usize) -> Vec<usize> {
        (0..self.n)
            .filter(|&b| self.gt(a, b) && !(0..self.n).any(|c| self.gt(a, c) && self.gt(c, b)))
            .collect()
    }
}

/// The transitive closure of the relation between partial smoothings, with
/// levels counted from the maximal tree.
pub fn poset(model: &TreeModel) -> Result<TreePoset> {
    let n = model.tree_count();
    let words = (n + 63) / 64;
    let smoothings: Vec<_> = (0..n).map(|t| model.smoothing(t)).collect();
    let mut greater = vec![vec![0u64; words]; n];
    let mut below: Vec<Vec<usize>> = vec![Vec::new(); n];
    for a in 0..n {
        for b in 0..n {
            if a != b && smoothings[a].covers(&smoothings[b]) {
                greater[a][b / 64] |= 1 << (b % 64);
                below[a].push(b);
            }
        }
    }
    // Closure by rows: a > c whenever a > b and b > c.
    for b in 0..n {
        let row_b = greater[b].clone();
        for a in 0..n {
            if greater[a][b / 64] >> (b % 64) & 1 == 1 {
                for (x, y) in greater[a].iter_mut().zip(&row_b) {
                    *x |= y;
                }
            }
        }
    }
    if (0..n).any(|a| greater[a][a / 64] >> (a % 64) & 1 == 1) {
        return Err(Error::Internal("tree relation has a cycle".into()));
    }
    // Longest paths from the sources, in an order compatible with `>`.
    let mut order: Vec<usize> = (0..n).collect();
    let count_below = |a: usize| greater[a].iter().map(|w| w.count_ones()).sum::<u32>();
    order.sort_by_key(|&a| std::cmp::Reverse(count_below(a)));
    let mut levels = vec![1usize; n];
    for &a in &order {
        for &b in &below[a] {
            levels[b] = levels[b].max(levels[a] + 1);
        }
    }
    let p = TreePoset { n, greater, levels };
    if n > 0 && (p.maximum().is_none() || p.minimum().is_none()) {
        return Err(Error::Internal("tree poset lacks a maximum or a minimum".into()));
    }
    Ok(p)
}

/// `F^p` = trees of level at least `p`, for `p = 1..=max_level`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Filtration {
    /// Trees of each level; entry `p - 1` holds level `p`.
    pub by_level: Vec<Vec<usize>>,
}

impl Filtration {
    pub fn depth(&self) -> usize {
        self.by_level.len()
    }

    /// Trees spanning `F^p` (empty past the last level).
    pub fn trees_in(&self, p: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self.by_level.iter().skip(p.saturating_sub(1)).flatten().copied().collect();
        out.sort_unstable();
        out
    }

    /// Maximal trees of `F^p`: the span of their down-sets is `F^p`.
    pub fn generators(&self, poset: &TreePoset, p: usize) -> Vec<usize> {
        let trees = self.trees_in(p);
        trees.iter().copied().filter(|&a| !trees.iter().any(|&b| poset.gt(b, a))).collect()
    }
}

pub fn filtration(poset: &TreePoset) -> Filtration {
    let mut by_level = vec![Vec::new(); poset.max_level()];
    for t in 0..poset.len() {
        by_level[poset.level(t) - 1].push(t);
    }
    Filtration { by_level }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn figure8_poset_and_filtration() {
        let model = TreeModel::from_graph(&fixtures::figure8_graph()).unwrap();
        let p = poset(&model).unwrap();
        let smoothings: Vec<String> = (0..5).map(|t| model.smoothing(t).to_string()).collect();
        assert_eq!(smoothings, ["**BB", "*BAB", "*AAB", "**BA", "**AA"]);
        assert_eq!(p.levels(), &[4, 3, 2, 2, 1]);
        assert_eq!((p.maximum(), p.minimum()), (Some(4), Some(0)));
        assert!(p.gt(4, 2) && p.gt(2, 1) && p.gt(1, 0) && p.gt(4, 3) && p.gt(3, 0));
        assert!(!p.comparable(1, 3) && !p.comparable(2, 3));
        let f = filtration(&p);
        assert_eq!(f.generators(&p, 1), [4]);
        assert_eq!(f.generators(&p, 2), [2, 3]);
        assert_eq!(f.generators(&p, 3), [1]);
        assert_eq!(f.generators(&p, 4), [0]);
        assert_eq!(f.trees_in(2), [0, 1, 2, 3]);
    }

    #[test]
    fn single_tree() {
        let model = TreeModel::from_diagram(&crate::diagram::parse_pd("X 1 1 2 2\n").unwrap()).unwrap();
        let p = poset(&model).unwrap();
        assert_eq!(p.levels(), &[1]);
    }

    #[test]
    fn levels_are_monotone() {
        for name in ["6_2", "8_20", "9_46"] {
            let model = TreeModel::from_diagram(&fixtures::diagram(name)).unwrap();
            let p = poset(&model).unwrap();
            for a in 0..p.len() {
                for b in 0..p.len() {
                    if p.gt(a, b) {
                        assert!(p.level(a) < p.level(b));
                    }
                }
            }
        }
    }
}
