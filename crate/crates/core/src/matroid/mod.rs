//! Colored graphic matroids, flip moves on signed plane graphs, and
//! mutation tests built on matroid isomorphism.

mod flip;
mod mutation;

pub use flip::{apply_flip, forest_bases, two_flip_sides, FlipMove};
pub use mutation::{are_mutants, compare_e2, conjecture_probe, flip_mutants, E2Report, EntryComparison, MutantWitness, ProbeReport};

use std::collections::HashSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::diagram::SignedPlanarGraph;
use crate::error::{Error, Result};
use crate::trees::enumerate_trees;

/// Edge positions with their signs, and the spanning trees as bases.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColoredMatroid {
    pub colors: Vec<i8>,
    /// Sorted bitmasks over edge positions.
    pub bases: Vec<u64>,
    pub rank: usize,
}

/// `map[e]` is the element of the second matroid matched with `e`.
pub type GroundSetBijection = Vec<usize>;

pub fn colored_matroid(g: &SignedPlanarGraph) -> Result<ColoredMatroid> {
    if !g.is_connected() {
        return Err(Error::GraphDisconnected);
    }
    let bases = enumerate_trees(g)?;
    Ok(ColoredMatroid {
        colors: g.edges().iter().map(|e| e.sign).collect(),
        rank: g.vertex_count() - 1,
        bases,
    })
}

impl ColoredMatroid {
    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    /// Checks equal basis sizes and the exchange axiom on up to `limit`
    /// ordered pairs of bases.
    pub fn check_axioms(&self, limit: usize) -> bool {
        let set: HashSet<u64> = self.bases.iter().copied().collect();
        if self.bases.iter().any(|b| b.count_ones() as usize != self.rank) {
            return false;
        }
        let pairs = self.bases.iter().flat_map(|&a| self.bases.iter().map(move |&b| (a, b)));
        pairs
            .take(limit)
            .all(|(a, b)| bits(a & !b).all(|x| bits(b & !a).any(|y| set.contains(&(a & !(1 << x) | 1 << y)))))
    }

    /// The matroid with its elements renamed: element `map[e]` of the
    /// result is `e` here.
    pub fn relabel(&self, map: &[usize]) -> ColoredMatroid {
        let mut colors = vec![0; self.len()];
        for (e, &f) in map.iter().enumerate() {
            colors[f] = self.colors[e];
        }
        let mut bases: Vec<u64> = self.bases.iter().map(|&b| bits(b).fold(0, |m, e| m | 1 << map[e])).collect();
        bases.sort_unstable();
        ColoredMatroid {
            colors,
            bases,
            rank: self.rank,
        }
    }

    fn degrees(&self) -> Vec<Vec<u32>> {
        let n = self.len();
        let mut pair = vec![vec![0u32; n]; n];
        for &b in &self.bases {
            for e in bits(b) {
                for f in bits(b) {
                    pair[e][f] += 1;
                }
            }
        }
        pair
    }
}

fn bits(mask: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |&i| mask >> i & 1 == 1)
}

/// A color-preserving bijection carrying bases onto bases, if any. The
/// search is exact; among all such bijections the lexicographically first
/// is returned.
pub fn matroid_isomorphic(m1: &ColoredMatroid, m2: &ColoredMatroid) -> Option<GroundSetBijection> {
    let n = m1.len();
    if n != m2.len() || m1.rank != m2.rank || m1.bases.len() != m2.bases.len() {
        return None;
    }
    let (p1, p2) = (m1.degrees(), m2.degrees());
    let mut c1: Vec<(i8, u32)> = (0..n).map(|e| (m1.colors[e], p1[e][e])).collect();
    let mut c2: Vec<(i8, u32)> = (0..n).map(|e| (m2.colors[e], p2[e][e])).collect();
    let class1 = c1.clone();
    c1.sort_unstable();
    c2.sort_unstable();
    if c1 != c2 {
        return None;
    }
    if n == 0 {
        return Some(Vec::new());
    }
    let target: HashSet<u64> = m2.bases.iter().copied().collect();
    let search = Search {
        n,
        m1,
        p1: &p1,
        p2: &p2,
        class1: &class1,
        class2: &(0..n).map(|e| (m2.colors[e], p2[e][e])).collect::<Vec<_>>(),
        target: &target,
    };
    let first: Vec<usize> = (0..n).filter(|&f| search.class2[f] == class1[0]).collect();
    first.par_iter().find_map_first(|&f| {
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        map[0] = f;
        used[f] = true;
        search.extend(1, &mut map, &mut used).then_some(map)
    })
}

struct Search<'a> {
    n: usize,
    m1: &'a ColoredMatroid,
    p1: &'a [Vec<u32>],
    p2: &'a [Vec<u32>],
    class1: &'a [(i8, u32)],
    class2: &'a [(i8, u32)],
    target: &'a HashSet<u64>,
}

impl Search<'_> {
    fn extend(&self, e: usize, map: &mut [usize], used: &mut [bool]) -> bool {
        if e == self.n {
            return self.m1.bases.iter().all(|&b| self.target.contains(&bits(b).fold(0u64, |m, x| m | 1 << map[x])));
        }
        for f in 0..self.n {
            if used[f] || self.class2[f] != self.class1[e] {
                continue;
            }
            if (0..e).any(|x| self.p1[x][e] != self.p2[map[x]][f]) {
                continue;
            }
            map[e] = f;
            used[f] = true;
            if self.extend(e + 1, map, used) {
                return true;
            }
            used[f] = false;
        }
        map[e] = usize::MAX;
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::trees::{canonical_graph, matrix_tree_count};

    fn graph(text: &str) -> SignedPlanarGraph {
        SignedPlanarGraph::parse(text).unwrap()
    }

    #[test]
    fn small_matroids() {
        let m = colored_matroid(&fixtures::figure8_graph()).unwrap();
        assert_eq!((m.len(), m.bases.len()), (4, 5));
        let one = graph("V 2\nE 1 1 2 1\nR 1 1\nR 2 1\n");
        let m1 = colored_matroid(&one).unwrap();
        assert_eq!((m1.len(), m1.bases.len(), m1.rank), (1, 1, 1));
        let triangle = graph("V 3\nE 1 1 2 1\nE 2 2 3 1\nE 3 3 1 1\nR 1 1 3\nR 2 2 1\nR 3 3 2\n");
        let m3 = colored_matroid(&triangle).unwrap();
        assert_eq!(m3.bases.len().to_string(), matrix_tree_count(&triangle).to_string());
        assert_eq!(m3.bases.len(), 3);
    }

    #[test]
    fn axioms_hold_on_fixtures() {
        for name in ["4_1", "6_2", "8_19", "10_132"] {
            let m = colored_matroid(&canonical_graph(&fixtures::diagram(name))).unwrap();
            assert!(m.check_axioms(5_000), "{name}");
        }
    }

    #[test]
    fn identity_and_relabelling() {
        let m = colored_matroid(&canonical_graph(&fixtures::diagram("7_4"))).unwrap();
        assert_eq!(matroid_isomorphic(&m, &m), Some((0..m.len()).collect()));
        let perm = vec![3, 0, 6, 1, 5, 2, 4];
        let r = m.relabel(&perm);
        let found = matroid_isomorphic(&m, &r).unwrap();
        assert_eq!(m.relabel(&found), r);
        assert!(matroid_isomorphic(&r, &m).is_some());
    }

    #[test]
    fn different_tree_counts_are_not_isomorphic() {
        let a = colored_matroid(&canonical_graph(&fixtures::diagram("4_1"))).unwrap();
        let b = colored_matroid(&canonical_graph(&fixtures::diagram("3_1"))).unwrap();
        assert_eq!((a.bases.len(), b.bases.len()), (5, 3));
        assert_eq!(matroid_isomorphic(&a, &b), None);
    }

    #[test]
    fn colors_must_match() {
        let g = graph("V 2\nE 1 1 2 1\nE 2 1 2 -1\nR 1 1 2\nR 2 2 1\n");
        let h = graph("V 2\nE 1 1 2 1\nE 2 1 2 1\nR 1 1 2\nR 2 2 1\n");
        let (a, b) = (colored_matroid(&g).unwrap(), colored_matroid(&h).unwrap());
        assert_eq!(matroid_isomorphic(&a, &b), None);
        assert_eq!(matroid_isomorphic(&a, &a), Some(vec![0, 1]));
    }
}
