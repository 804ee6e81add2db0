//! The spanning-tree model of the reduced and unreduced Khovanov complexes:
//! fundamental cycles, direct incidences, the tree poset and its
//! filtration, the collapsed tree complex, spectral-sequence pages and
//! ladders of enhanced states.

mod collapse;
mod cycle;
mod incidence;
mod ladder;
mod pages;
mod poset;

pub use collapse::{collapse_to_tree_complex, TreeComplexData, TreeGenerator};
pub use cycle::{fundamental_cycle, fundamental_cycle_in_order, CycleTable, FundamentalCycle, Variant};
pub use incidence::{classify_direct, direct_incidence, direct_incidences, inner_product, DirectIncidence};
pub use ladder::{ladders, Ladder, LadderLimits, LadderReport, LadderStep};
pub use pages::{d1_matrix, e2_integral, spectral_page, Page, PageGroups, PageKey, SpectralSequence};
pub use poset::{filtration, poset, Filtration, TreePoset};

use crate::diagram::{medial, Diagram, SignedPlanarGraph};
use crate::error::{Error, Result};
use crate::trees::{activity_word, canonical_graph, enumerate_trees, ActivityWord, PartialSmoothing, TreeMask};

/// A diagram together with a Tait graph whose edge `i` is crossing `i`,
/// and the spanning trees of that graph.
#[derive(Clone, Debug)]
pub struct TreeModel {
    pub diagram: Diagram,
    pub graph: SignedPlanarGraph,
    pub trees: Vec<TreeMask>,
    pub words: Vec<ActivityWord>,
}

/// Diagrams above this size are refused: every Kauffman state is stored.
pub const MAX_STATE_CROSSINGS: usize = 24;

impl TreeModel {
    pub fn from_diagram(d: &Diagram) -> Result<Self> {
        Self::build(d.clone(), canonical_graph(d))
    }

    /// Uses the medial diagram of `g`, so the edge order is kept.
    pub fn from_graph(g: &SignedPlanarGraph) -> Result<Self> {
        Self::build(medial(g), g.clone())
    }

    /// `graph` must be a Tait graph of `diagram` whose edge `i` is
    /// crossing `i`.
    pub fn with_graph(diagram: Diagram, graph: SignedPlanarGraph) -> Result<Self> {
        Self::build(diagram, graph)
    }

    fn build(diagram: Diagram, graph: SignedPlanarGraph) -> Result<Self> {
        if diagram.crossing_count() > MAX_STATE_CROSSINGS {
            return Err(Error::TooLarge {
                crossings: diagram.crossing_count(),
                limit: MAX_STATE_CROSSINGS,
            });
        }
        if diagram.crossing_count() != graph.edge_count() {
            return Err(Error::LengthMismatch(diagram.crossing_count(), graph.edge_count()));
        }
        let trees = enumerate_trees(&graph)?;
        let words = trees.iter().map(|&t| activity_word(&graph, t)).collect();
        Ok(TreeModel { diagram, graph, trees, words })
    }

    /// Moves the basepoint (an arc label of the diagram).
    pub fn with_basepoint(&self, label: u32) -> Result<Self> {
        Ok(TreeModel {
            diagram: self.diagram.with_basepoint(label)?,
            ..self.clone()
        })
    }

    pub fn tree_count(&self) -> usize {
        self.trees.len()
    }

    pub fn crossing_count(&self) -> usize {
        self.diagram.crossing_count()
    }

    pub fn smoothing(&self, t: usize) -> PartialSmoothing {
        self.words[t].partial_smoothing()
    }

    /// `(u, v)` of tree `t`.
    pub fn grading(&self, t: usize) -> (i64, i64) {
        (self.words[t].grading_u(), self.words[t].grading_v())
    }

    /// Markers of the fundamental cycle's state (bit set = B).
    pub fn cycle_markers(&self, t: usize) -> u64 {
        mask(self.words[t].cycle_markers().into_iter())
    }

    pub fn live_mask(&self, t: usize) -> u64 {
        self.words[t].live_mask()
    }

    /// Tree whose twisted unknot has the Kauffman state `markers` among its
    /// states, for every state of the diagram.
    pub fn state_owners(&self) -> Result<Vec<u32>> {
        let n = self.crossing_count();
        let mut owner = vec![u32::MAX; 1usize << n];
        for t in 0..self.tree_count() {
            let (live, fixed) = (self.live_mask(t), self.cycle_markers(t) & !self.live_mask(t));
            // Enumerate all subsets of the live mask.
            let mut sub = 0u64;
            loop {
                let s = (fixed | sub) as usize;
                if owner[s] != u32::MAX {
                    return Err(Error::Internal(format!("state {s:b} lies in two twisted unknots")));
                }
                owner[s] = t as u32;
                sub = sub.wrapping_sub(live) & live;
                if sub == 0 {
                    break;
                }
            }
        }
        if owner.contains(&u32::MAX) {
            return Err(Error::Internal("twisted unknots miss a Kauffman state".into()));
        }
        Ok(owner)
    }

    pub fn grading_shift(&self) -> GradingShift {
        let (n_plus, _) = self.diagram.sign_counts();
        GradingShift {
            c_u: 1 - self.diagram.writhe(),
            c_v: (self.graph.positive_count() + self.graph.vertex_count()) as i64 - n_plus as i64,
        }
    }
}

fn mask(bits: impl Iterator<Item = bool>) -> u64 {
    bits.enumerate().filter(|(_, b)| *b).fold(0, |m, (i, _)| m | 1 << i)
}

/// Affine relation between tree gradings `(u, v)` and Khovanov bidegrees
/// `(i, j)`: `u = j - i + c_u` and `2v = j - 2i + c_v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GradingShift {
    pub c_u: i64,
    pub c_v: i64,
}

impl GradingShift {
    pub fn to_kh(&self, (u, v): (i64, i64)) -> (i64, i64) {
        let i = (u - self.c_u) - (2 * v - self.c_v);
        (i, i + u - self.c_u)
    }

    /// `None` when the bidegree has the wrong parity for a tree grading.
    pub fn to_tree(&self, (i, j): (i64, i64)) -> Option<(i64, i64)> {
        let twice_v = j - 2 * i + self.c_v;
        (twice_v % 2 == 0).then_some((j - i + self.c_u, twice_v / 2))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::khovanov::loops;

    #[test]
    fn cycle_states_are_maximally_disconnected() {
        for name in ["3_1", "4_1", "6_2", "8_19", "9_42"] {
            let m = TreeModel::from_diagram(&fixtures::diagram(name)).unwrap();
            let n = m.crossing_count();
            for t in 0..m.tree_count() {
                let k = loops(&m.diagram, &crate::khovanov::marker_vec(m.cycle_markers(t), n)).count;
                assert_eq!(k as u32, m.live_mask(t).count_ones() + 1, "{name} tree {t}");
            }
        }
    }

    #[test]
    fn twisted_unknots_partition_the_states() {
        for name in ["4_1", "7_4", "8_20"] {
            let m = TreeModel::from_diagram(&fixtures::diagram(name)).unwrap();
            assert!(m.state_owners().is_ok());
        }
        let m = TreeModel::from_graph(&fixtures::figure8_graph()).unwrap();
        assert!(m.state_owners().is_ok());
    }

    #[test]
    fn grading_shift_round_trips() {
        let s = GradingShift { c_u: -2, c_v: 5 };
        for u in -4..4 {
            for v in 0..5 {
                assert_eq!(s.to_tree(s.to_kh((u, v))), Some((u, v)));
            }
        }
    }
}
