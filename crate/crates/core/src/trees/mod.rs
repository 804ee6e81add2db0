//! Spanning trees of a signed plane graph: enumeration, cuts and cycles,
//! activity words, Thistlethwaite monomials and the bracket they sum to.

mod word;

pub use word::{ActivityWord, Letter, Mark, PartialSmoothing};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::diagram::{canonical_coloring, tait_graph, Diagram, SignedPlanarGraph};
use crate::error::{Error, Result};
use crate::poly::{PolyA, PolyT};

/// Edge subset as a bit mask over edge positions.
pub type TreeMask = u64;

pub const MAX_EDGES: usize = 64;

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            self.0[r] = self.0[self.0[r]];
            r = self.0[r];
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra] = rb;
        true
    }
}

/// All spanning trees in increasing mask order.
pub fn enumerate_trees(g: &SignedPlanarGraph) -> Result<Vec<TreeMask>> {
    if !g.is_connected() {
        return Err(Error::GraphDisconnected);
    }
    if g.edge_count() > MAX_EDGES {
        return Err(Error::TooLarge {
            crossings: g.edge_count(),
            limit: MAX_EDGES,
        });
    }
    let mut out = Vec::new();
    let uf = UnionFind::new(g.vertex_count());
    branch(g, 0, uf, g.vertex_count(), 0, &mut out);
    out.sort_unstable();
    Ok(out)
}

/// Include/exclude recursion over edges in order: an edge is included when
/// it joins two components (contraction) and excluded when the later edges
/// can still connect everything (deletion).
fn branch(g: &SignedPlanarGraph, i: usize, mut uf: UnionFind, comps: usize, mask: TreeMask, out: &mut Vec<TreeMask>) {
    if comps == 1 {
        out.push(mask);
        return;
    }
    if i == g.edge_count() {
        return;
    }
    let [a, b] = g.edge(i).ends;
    let joins = uf.find(a) != uf.find(b);
    let mut rest = UnionFind(uf.0.clone());
    let mut rest_comps = comps;
    for e in g.edges()[i + 1..].iter() {
        if rest.union(e.ends[0], e.ends[1]) {
            rest_comps -= 1;
        }
    }
    if rest_comps == 1 {
        branch(g, i + 1, UnionFind(uf.0.clone()), comps, mask, out);
    }
    if joins {
        uf.union(a, b);
        branch(g, i + 1, uf, comps - 1, mask | 1 << i, out);
    }
}

/// Number of spanning trees by the matrix-tree theorem (Bareiss elimination
/// on a reduced Laplacian).
pub fn matrix_tree_count(g: &SignedPlanarGraph) -> BigInt {
    let n = g.vertex_count();
    if n <= 1 {
        return BigInt::one();
    }
    let mut lap = vec![vec![BigInt::zero(); n]; n];
    for e in g.edges() {
        let [a, b] = e.ends;
        if a != b {
            lap[a][a] += 1;
            lap[b][b] += 1;
            lap[a][b] -= 1;
            lap[b][a] -= 1;
        }
    }
    let mut m: Vec<Vec<BigInt>> = lap[1..].iter().map(|r| r[1..].to_vec()).collect();
    let k = n - 1;
    let mut prev = BigInt::one();
    let mut sign = BigInt::one();
    for p in 0..k {
        if m[p][p].is_zero() {
            match (p + 1..k).find(|&r| !m[r][p].is_zero()) {
                Some(r) => {
                    m.swap(p, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for r in p + 1..k {
            for c in p + 1..k {
                let v = (&m[r][c] * &m[p][p] - &m[r][p] * &m[p][c]) / &prev;
                m[r][c] = v;
            }
        }
        prev = m[p][p].clone();
    }
    sign * &m[k - 1][k - 1]
}

fn check_edge(g: &SignedPlanarGraph, e: usize) -> Result<()> {
    if e >= g.edge_count() {
        return Err(Error::EdgeMembership {
            edge: e + 1,
            msg: "no such edge".into(),
        });
    }
    Ok(())
}

/// Edges reconnecting the two components of `T - e`; requires `e` in `T`.
pub fn cut(g: &SignedPlanarGraph, t: TreeMask, e: usize) -> Result<TreeMask> {
    check_edge(g, e)?;
    if t >> e & 1 == 0 {
        return Err(Error::EdgeMembership {
            edge: e + 1,
            msg: "cut needs a tree edge".into(),
        });
    }
    let mut uf = UnionFind::new(g.vertex_count());
    for (i, edge) in g.edges().iter().enumerate() {
        if i != e && t >> i & 1 == 1 {
            uf.union(edge.ends[0], edge.ends[1]);
        }
    }
    let mut out = 0;
    for (i, edge) in g.edges().iter().enumerate() {
        if uf.find(edge.ends[0]) != uf.find(edge.ends[1]) {
            out |= 1 << i;
        }
    }
    Ok(out)
}

/// Edges of the unique cycle in `T + f`; requires `f` outside `T`.
pub fn cyc(g: &SignedPlanarGraph, t: TreeMask, f: usize) -> Result<TreeMask> {
    check_edge(g, f)?;
    if t >> f & 1 == 1 {
        return Err(Error::EdgeMembership {
            edge: f + 1,
            msg: "cycle needs a non-tree edge".into(),
        });
    }
    let [a, b] = g.edge(f).ends;
    // Tree path from a to b by depth-first search.
    let n = g.vertex_count();
    let mut via: Vec<Option<usize>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut stack = vec![a];
    seen[a] = true;
    while let Some(v) = stack.pop() {
        for d in g.rotation(v) {
            if t >> d.edge & 1 == 0 {
                continue;
            }
            let w = g.vertex_of(d.reverse());
            if !seen[w] {
                seen[w] = true;
                via[w] = Some(d.edge);
                stack.push(w);
            }
        }
    }
    let mut out = 1 << f;
    let mut v = b;
    while v != a {
        let e = via[v].ok_or_else(|| Error::Internal("tree does not span".into()))?;
        out |= 1 << e;
        let [x, y] = g.edge(e).ends;
        v = if x == v { y } else { x };
    }
    Ok(out)
}

/// The activity word of `T` for the graph's edge order.
pub fn activity_word(g: &SignedPlanarGraph, t: TreeMask) -> ActivityWord {
    let letters = (0..g.edge_count())
        .map(|e| {
            let in_tree = t >> e & 1 == 1;
            let set = if in_tree { cut(g, t, e) } else { cyc(g, t, e) }.expect("membership checked");
            let live = set.trailing_zeros() as usize == e;
            Letter::new(g.edge(e).sign > 0, in_tree, live)
        })
        .collect();
    ActivityWord(letters)
}

/// Per-tree data, as emitted by the `trees` subcommand.
#[derive(Clone, Debug, Serialize)]
pub struct TreeInfo {
    pub index: usize,
    pub edge_mask: TreeMask,
    pub word: String,
    pub u: i64,
    pub v: i64,
    pub monomial: String,
    pub smoothing: String,
}

pub fn tree_table(g: &SignedPlanarGraph) -> Result<Vec<TreeInfo>> {
    Ok(enumerate_trees(g)?
        .into_iter()
        .enumerate()
        .map(|(i, t)| {
            let w = activity_word(g, t);
            TreeInfo {
                index: i + 1,
                edge_mask: t,
                word: w.to_string(),
                u: w.grading_u(),
                v: w.grading_v(),
                monomial: w.monomial().to_string(),
                smoothing: w.partial_smoothing().to_string(),
            }
        })
        .collect())
}

/// Sum of the tree monomials.
pub fn bracket_by_trees(g: &SignedPlanarGraph) -> Result<PolyA> {
    Ok(enumerate_trees(g)?.into_iter().map(|t| activity_word(g, t).monomial()).sum())
}

/// The Tait graph used throughout: canonical coloring, crossing order.
pub fn canonical_graph(d: &Diagram) -> SignedPlanarGraph {
    tait_graph(d, &canonical_coloring(d))
}

/// Normalized bracket `(-A)^{-3w} <D>` rewritten in `t = A^{-4}`.
pub fn normalize_jones(bracket: &PolyA, writhe: i64) -> PolyT {
    let sign = if writhe.rem_euclid(2) == 0 { 1 } else { -1 };
    let f = PolyA::monomial(sign, -3 * writhe);
    let p = &f * bracket;
    // A^k = (t^{1/2})^{-k/2}.
    p.compress(2).expect("normalized bracket has even exponents").substitute(-1, false)
}

/// Jones polynomial via the spanning-tree expansion of the bracket.
pub fn jones(d: &Diagram) -> Result<PolyT> {
    Ok(normalize_jones(&bracket_by_trees(&canonical_graph(d))?, d.writhe()))
}

/// `A`-count minus `B`-count of a fully resolved state.
pub fn sigma(marks: &[Mark]) -> Result<i64> {
    marks.iter().try_fold(0, |acc, m| match m {
        Mark::A => Ok(acc + 1),
        Mark::B => Ok(acc - 1),
        Mark::Live => Err(Error::Unresolved),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn two_parallel() -> SignedPlanarGraph {
        SignedPlanarGraph::parse("V 2\nE 1 1 2 1\nE 2 1 2 1\nR 1 1 2\nR 2 2 1\n").unwrap()
    }

    #[test]
    fn tree_counts() {
        let single = SignedPlanarGraph::parse("V 2\nE 1 1 2 1\nR 1 1\nR 2 1\n").unwrap();
        assert_eq!(enumerate_trees(&single).unwrap(), vec![1]);
        let tri = SignedPlanarGraph::parse("V 3\nE 1 1 2 1\nE 2 2 3 1\nE 3 3 1 1\nR 1 1 3\nR 2 2 1\nR 3 3 2\n").unwrap();
        assert_eq!(enumerate_trees(&tri).unwrap().len(), 3);
        assert_eq!(matrix_tree_count(&tri), BigInt::from(3));
        let fig8 = fixtures::figure8_graph();
        assert_eq!(enumerate_trees(&fig8).unwrap(), vec![3, 5, 6, 10, 12]);
    }

    #[test]
    fn parallel_cut_and_cycle() {
        let g = two_parallel();
        assert_eq!(cut(&g, 0b01, 0).unwrap(), 0b11);
        assert_eq!(cyc(&g, 0b01, 1).unwrap(), 0b11);
        assert!(cut(&g, 0b01, 1).is_err());
        assert!(cyc(&g, 0b01, 0).is_err());
    }

    #[test]
    fn single_edge_word_and_monomial() {
        let g = SignedPlanarGraph::parse("V 2\nE 1 1 2 1\nR 1 1\nR 2 1\n").unwrap();
        let w = activity_word(&g, 1);
        assert_eq!(w.to_string(), "L");
        assert_eq!(w.monomial(), PolyA::monomial(-1, -3));
        let unknot = SignedPlanarGraph::parse("V 1\nR 1\n").unwrap();
        assert_eq!(bracket_by_trees(&unknot).unwrap(), PolyA::one());
    }

    #[test]
    fn figure_eight_jones() {
        let v = jones(&fixtures::diagram("4_1")).unwrap();
        assert_eq!(v, PolyT::from_terms([(-4, 1), (-2, -1), (0, 1), (2, -1), (4, 1)]));
        assert_eq!(jones(&Diagram::round_unknot()).unwrap(), PolyT::one());
    }

    #[test]
    fn trefoil_jones_chirality() {
        // Writhe -3 diagram: -t^-4 + t^-3 + t^-1.
        let left = jones(&fixtures::diagram("3_1")).unwrap();
        assert_eq!(left, PolyT::from_terms([(-8, -1), (-6, 1), (-2, 1)]));
        let right = jones(&fixtures::diagram("trefoil_right")).unwrap();
        assert_eq!(right, PolyT::from_terms([(2, 1), (6, 1), (8, -1)]));
    }

    #[test]
    fn sigma_counts() {
        assert_eq!(sigma(&[Mark::B, Mark::B]).unwrap(), -2);
        assert_eq!(sigma(&[Mark::A, Mark::A]).unwrap(), 2);
        assert_eq!(sigma(&[Mark::A, Mark::B]).unwrap(), 0);
        assert_eq!(sigma(&[Mark::A, Mark::Live]), Err(Error::Unresolved));
    }
}
