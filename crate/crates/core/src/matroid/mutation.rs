use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Serialize, Serializer};

use super::{apply_flip, colored_matroid, matroid_isomorphic, two_flip_sides, FlipMove, GroundSetBijection};
use crate::diagram::{checkerboard, medial, tait_graph, Diagram, SignedPlanarGraph};
use crate::error::{Error, Result};
use crate::khovanov::Group;
use crate::tree_complex::{collapse_to_tree_complex, e2_integral, PageGroups, PageKey, TreeModel};
use crate::trees::canonical_graph;

/// A matroid isomorphism between Tait graphs of two diagrams. Edge `e` of
/// `first` corresponds to edge `bijection[e]` of `second`.
#[derive(Clone, Debug, Serialize)]
pub struct MutantWitness {
    pub bijection: GroundSetBijection,
    #[serde(skip)]
    pub first: SignedPlanarGraph,
    #[serde(skip)]
    pub second: SignedPlanarGraph,
}

impl MutantWitness {
    /// Tree models of both diagrams, with the second diagram's crossings
    /// renumbered so that the two colored matroids coincide element by
    /// element.
    pub fn transported_models(&self, d1: &Diagram, d2: &Diagram) -> Result<(TreeModel, TreeModel)> {
        let m1 = TreeModel::with_graph(d1.clone(), self.first.clone())?;
        let m2 = TreeModel::with_graph(d2.reorder_crossings(&self.bijection)?, self.second.reorder_edges(&self.bijection)?)?;
        Ok((m1, m2))
    }
}

/// Tait graphs of `d` to compare against: the canonical one, and the other
/// coloring as well when both have as many positive edges.
fn candidate_graphs(d: &Diagram) -> Vec<SignedPlanarGraph> {
    let canonical = canonical_graph(d);
    let (a, b) = checkerboard(d);
    let mut out = vec![canonical.clone()];
    for c in [a, b] {
        let g = tait_graph(d, &c);
        if g.positive_count() == canonical.positive_count() && !g.same_plane_graph(&canonical) {
            out.push(g);
        }
    }
    out
}

/// Decides mutation through isomorphism of colored Tait matroids.
pub fn are_mutants(d1: &Diagram, d2: &Diagram) -> Result<Option<MutantWitness>> {
    if d1.crossing_count() != d2.crossing_count() {
        return Ok(None);
    }
    let g1 = canonical_graph(d1);
    let m1 = colored_matroid(&g1)?;
    for g2 in candidate_graphs(d2) {
        if let Some(bijection) = matroid_isomorphic(&m1, &colored_matroid(&g2)?) {
            return Ok(Some(MutantWitness {
                bijection,
                first: g1,
                second: g2,
            }));
        }
    }
    Ok(None)
}

/// Mutants of `d` from 2-flips of its Tait graph that avoid edge 0 (so the
/// basepoint stays outside the turned tangle) and change the graph. Each
/// result pairs the move with the medial diagrams before and after it.
pub fn flip_mutants(d: &Diagram) -> Result<Vec<(FlipMove, Diagram, Diagram)>> {
    let g = canonical_graph(d);
    let mut out = Vec::new();
    for (u, v, edges) in two_flip_sides(&g) {
        if edges.contains(&0) {
            continue;
        }
        let mv = FlipMove::TwoFlip { u, v, edges };
        let Ok(f) = apply_flip(&g, &mv) else { continue };
        if g.sphere_isomorphism(&f).is_none() {
            out.push((mv, medial(&g), medial(&f)));
        }
    }
    Ok(out)
}

fn serialize_groups<S: Serializer>(g: &BTreeMap<PageKey, Group>, s: S) -> std::result::Result<S::Ok, S::Error> {
    PageGroups(g).serialize(s)
}

#[derive(Clone, Debug, Serialize)]
pub struct E2Report {
    pub witness: Option<GroundSetBijection>,
    #[serde(serialize_with = "serialize_groups")]
    pub first: BTreeMap<PageKey, Group>,
    #[serde(serialize_with = "serialize_groups")]
    pub second: BTreeMap<PageKey, Group>,
    /// Keys where rank or torsion differ.
    pub differences: Vec<PageKey>,
    pub equal: bool,
}

/// Integral `E_2` terms of both diagrams, the second one's edge order
/// transported along a witness when the two are mutants.
pub fn compare_e2(d1: &Diagram, d2: &Diagram) -> Result<E2Report> {
    let witness = are_mutants(d1, d2)?;
    let (m1, m2) = match &witness {
        Some(w) => w.transported_models(d1, d2)?,
        None => (TreeModel::from_diagram(d1)?, TreeModel::from_diagram(d2)?),
    };
    let (first, second) = (e2_integral(&m1)?, e2_integral(&m2)?);
    let keys: BTreeSet<PageKey> = first.keys().chain(second.keys()).copied().collect();
    let differences: Vec<PageKey> = keys.into_iter().filter(|k| first.get(k) != second.get(k)).collect();
    Ok(E2Report {
        witness: witness.map(|w| w.bijection),
        equal: differences.is_empty(),
        first,
        second,
        differences,
    })
}

/// One entry of the collapsed differential, between trees with the given
/// activity words.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EntryComparison {
    pub from_word: String,
    pub to_word: String,
    pub first: i64,
    pub second: i64,
}

/// Entrywise comparison of the reduced collapsed differentials of two
/// matroid-isomorphic diagrams, matching trees by activity word. This is
/// evidence, not a proof, either way.
#[derive(Clone, Debug, Serialize)]
pub struct ProbeReport {
    pub witness: GroundSetBijection,
    pub trees: usize,
    /// Trees of either diagram whose word does not occur in the other.
    pub unmatched_trees: usize,
    /// Nonzero entries on at least one side.
    pub compared: usize,
    pub agreements: usize,
    /// Entries equal up to sign.
    pub sign_differences: Vec<EntryComparison>,
    pub disagreements: Vec<EntryComparison>,
}

impl ProbeReport {
    pub fn full_agreement(&self) -> bool {
        self.unmatched_trees == 0 && self.sign_differences.is_empty() && self.disagreements.is_empty()
    }
}

pub fn conjecture_probe(d1: &Diagram, d2: &Diagram) -> Result<ProbeReport> {
    let witness = are_mutants(d1, d2)?.ok_or(Error::NotIsomorphic)?;
    let (m1, m2) = witness.transported_models(d1, d2)?;
    let (c1, c2) = (collapse_to_tree_complex(&m1, true)?, collapse_to_tree_complex(&m2, true)?);
    let by_word: HashMap<&_, usize> = m2.words.iter().enumerate().map(|(t, w)| (w, t)).collect();
    let to_second: Vec<Option<usize>> = m1.words.iter().map(|w| by_word.get(w).copied()).collect();
    let matched = to_second.iter().flatten().count();
    let mut entries: BTreeMap<(usize, usize), (i64, i64)> = BTreeMap::new();
    for &(a, b, v) in &c1.differential {
        entries.entry((c1.generators[a].tree, c1.generators[b].tree)).or_default().0 = v;
    }
    let mut from_first: Vec<Option<usize>> = vec![None; m2.tree_count()];
    for (t, s) in to_second.iter().enumerate() {
        if let Some(s) = s {
            from_first[*s] = Some(t);
        }
    }
    let mut report = ProbeReport {
        witness: witness.bijection.clone(),
        trees: m1.tree_count(),
        unmatched_trees: (m1.tree_count() - matched) + (m2.tree_count() - matched),
        compared: 0,
        agreements: 0,
        sign_differences: Vec::new(),
        disagreements: Vec::new(),
    };
    for &(a, b, v) in &c2.differential {
        let (s1, s2) = (c2.generators[a].tree, c2.generators[b].tree);
        if let (Some(t1), Some(t2)) = (from_first[s1], from_first[s2]) {
            entries.entry((t1, t2)).or_default().1 = v;
        }
    }
    for ((t1, t2), (x, y)) in entries {
        if to_second[t1].is_none() || to_second[t2].is_none() {
            continue;
        }
        report.compared += 1;
        let cmp = EntryComparison {
            from_word: m1.words[t1].to_string(),
            to_word: m1.words[t2].to_string(),
            first: x,
            second: y,
        };
        if x == y {
            report.agreements += 1;
        } else if x == -y {
            report.sign_differences.push(cmp);
        } else {
            report.disagreements.push(cmp);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn reflexive_and_tree_count_obstruction() {
        let f8 = fixtures::diagram("4_1");
        let w = are_mutants(&f8, &f8).unwrap().unwrap();
        assert_eq!(w.bijection, vec![0, 1, 2, 3]);
        assert!(are_mutants(&f8, &fixtures::diagram("3_1")).unwrap().is_none());
    }

    #[test]
    fn e2_of_a_diagram_with_itself() {
        let d = fixtures::diagram("6_2");
        let r = compare_e2(&d, &d).unwrap();
        assert!(r.equal && r.differences.is_empty());
        let p = conjecture_probe(&d, &d).unwrap();
        assert!(p.full_agreement());
        assert_eq!(p.trees, 11);
    }

    #[test]
    fn figure_eight_and_trefoil_e2_differ() {
        let r = compare_e2(&fixtures::diagram("4_1"), &fixtures::diagram("3_1")).unwrap();
        assert!(!r.equal);
        let total = |m: &BTreeMap<PageKey, Group>| m.values().map(|g| g.rank).sum::<usize>();
        assert_eq!((total(&r.first), total(&r.second)), (5, 3));
    }

    #[test]
    fn kinoshita_terasaka_flips_to_conway() {
        let kt = canonical_graph(&fixtures::diagram(fixtures::KINOSHITA_TERASAKA));
        let conway = canonical_graph(&fixtures::diagram(fixtures::CONWAY));
        let (u, v, edges) = fixtures::KT_CONWAY_FLIP;
        let flipped = apply_flip(&kt, &FlipMove::TwoFlip { u, v, edges: edges.to_vec() }).unwrap();
        assert!(flipped.sphere_isomorphism(&conway).is_some());
        assert!(kt.sphere_isomorphism(&conway).is_none());
    }

    #[test]
    fn flip_mutants_are_witnessed() {
        for name in ["7_7", "9_42"] {
            let found = flip_mutants(&fixtures::diagram(name)).unwrap();
            assert!(!found.is_empty(), "{name}");
            for (_, a, b) in found {
                let w = are_mutants(&a, &b).unwrap().unwrap();
                assert_eq!(w.bijection.len(), a.crossing_count());
            }
        }
    }

    #[test]
    fn probe_needs_an_isomorphism() {
        let r = conjecture_probe(&fixtures::diagram("4_1"), &fixtures::diagram("5_2"));
        assert!(matches!(r, Err(Error::NotIsomorphic)));
    }
}
