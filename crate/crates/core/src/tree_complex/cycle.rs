use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use super::TreeModel;
use crate::error::{Error, Result};
use crate::khovanov::{Generator, KhComplex, A_PAIRS, B_PAIRS};

/// Which enhancement of the round unknot a fundamental cycle starts from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Variant {
    Plus,
    Minus,
}

/// A fundamental cycle: a combination of enhanced states sharing one
/// Kauffman state.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FundamentalCycle {
    pub tree: usize,
    pub variant: Variant,
    pub markers: u64,
    /// Sorted by generator; coefficients are nonzero.
    pub terms: Vec<(Generator, i64)>,
    /// The summand with coefficient one that stands for the cycle in a
    /// basis change: base loop by the variant, children of A-type twists
    /// `+`, children of B-type twists `-`.
    pub leading: Generator,
}

impl FundamentalCycle {
    pub fn coefficient(&self, g: Generator) -> i64 {
        self.terms.binary_search_by_key(&g, |t| t.0).map_or(0, |k| self.terms[k].1)
    }
}

/// Loop tree of a maximally disconnected state: `(crossing, parent, child,
/// a_type)` for every live crossing.
fn twist_tree(model: &TreeModel, kh: &KhComplex, t: usize) -> Result<(usize, Vec<(usize, usize, usize, bool)>)> {
    let markers = model.cycle_markers(t);
    let live = model.live_mask(t);
    let loops = kh.loops_of(markers);
    if loops.count != live.count_ones() as usize + 1 {
        return Err(Error::Internal(format!("tree {t}: state is not maximally disconnected")));
    }
    let root = kh.base_loop(markers);
    let mut edges = Vec::new();
    for c in 0..model.crossing_count() {
        if live >> c & 1 == 0 {
            continue;
        }
        let a_type = markers >> c & 1 == 0;
        let pairs = if a_type { A_PAIRS } else { B_PAIRS };
        let x = model.diagram.crossing(c);
        let (p, q) = (loops.arc_loop[x[pairs[0][0] as usize]], loops.arc_loop[x[pairs[1][0] as usize]]);
        if p == q {
            return Err(Error::Internal(format!("tree {t}: live crossing {c} is not a twist")));
        }
        edges.push((c, p, q, a_type));
    }
    // Orient away from the base loop.
    let mut depth = vec![usize::MAX; loops.count];
    depth[root] = 0;
    let mut oriented = Vec::with_capacity(edges.len());
    let mut remaining = edges;
    while !remaining.is_empty() {
        let before = remaining.len();
        remaining.retain(|&(c, p, q, a)| {
            if depth[p] != usize::MAX {
                depth[q] = depth[p] + 1;
                oriented.push((c, p, q, a));
                false
            } else if depth[q] != usize::MAX {
                depth[p] = depth[q] + 1;
                oriented.push((c, q, p, a));
                false
            } else {
                true
            }
        });
        if remaining.len() == before {
            return Err(Error::Internal(format!("tree {t}: twists do not form a tree")));
        }
    }
    Ok((root, oriented))
}

/// The fundamental cycle of tree `t`, adding twists in crossing order.
pub fn fundamental_cycle(model: &TreeModel, kh: &KhComplex, t: usize, variant: Variant) -> Result<FundamentalCycle> {
    fundamental_cycle_in_order(model, kh, t, variant, &(0..model.crossing_count()).collect::<Vec<_>>())
}

/// Same, but twists are added following `order` (a permutation of the
/// crossings) as far as the loop tree allows: each step adds the first
/// twist in `order` whose parent loop already exists.
pub fn fundamental_cycle_in_order(model: &TreeModel, kh: &KhComplex, t: usize, variant: Variant, order: &[usize]) -> Result<FundamentalCycle> {
    if variant == Variant::Minus && kh.is_reduced() {
        return Err(Error::Internal("the reduced complex has no minus cycles".into()));
    }
    let markers = model.cycle_markers(t);
    let (root, edges) = twist_tree(model, kh, t)?;
    let rank: HashMap<usize, usize> = order.iter().enumerate().map(|(k, &c)| (c, k)).collect();
    let mut pending = edges;
    pending.sort_by_key(|e| rank.get(&e.0).copied().unwrap_or(usize::MAX));
    let mut present = vec![false; kh.loop_count(markers)];
    present[root] = true;
    let root_bit = if variant == Variant::Plus { 1u64 << root } else { 0 };
    let mut chain: BTreeMap<u64, i64> = BTreeMap::from([(root_bit, 1)]);
    let mut leading = root_bit;
    while !pending.is_empty() {
        let k = pending
            .iter()
            .position(|e| present[e.1])
            .ok_or_else(|| Error::Internal("twist order is not a tree order".into()))?;
        let (_, x, s, a_type) = pending.remove(k);
        present[s] = true;
        if !a_type {
            // A negative twist: the new loop is `-`.
            continue;
        }
        leading |= 1 << s;
        // A positive twist: x+ -> x+ s+, x- -> x- s+ - x+ s-.
        let mut next = BTreeMap::new();
        for (signs, c) in chain {
            *next.entry(signs | 1 << s).or_insert(0) += c;
            if signs >> x & 1 == 0 {
                *next.entry(signs | 1 << x).or_insert(0) -= c;
            }
        }
        next.retain(|_, c| *c != 0);
        chain = next;
    }
    let terms: Vec<(Generator, i64)> = chain.into_iter().map(|(signs, c)| (Generator { markers, signs }, c)).collect();
    let leading = Generator { markers, signs: leading };
    let cycle = FundamentalCycle {
        tree: t,
        variant,
        markers,
        terms,
        leading,
    };
    if cycle.coefficient(leading) != 1 {
        return Err(Error::Internal(format!("tree {t}: leading summand lost")));
    }
    Ok(cycle)
}

/// Fundamental cycles of every tree in one Khovanov complex, with a lookup
/// from leading summands back to cycles.
pub struct CycleTable {
    pub kh: KhComplex,
    /// Reduced: one cycle per tree. Unreduced: `Plus` then `Minus` per tree.
    pub cycles: Vec<FundamentalCycle>,
    pub by_leading: HashMap<Generator, usize>,
}

impl CycleTable {
    pub fn new(model: &TreeModel, reduced: bool) -> Result<Self> {
        let kh = KhComplex::new(&model.diagram, reduced);
        let variants: &[Variant] = if reduced { &[Variant::Plus] } else { &[Variant::Plus, Variant::Minus] };
        let cycles: Vec<FundamentalCycle> = (0..model.tree_count())
            .into_par_iter()
            .flat_map_iter(|t| variants.iter().map(move |&v| (t, v)))
            .map(|(t, v)| fundamental_cycle(model, &kh, t, v))
            .collect::<Result<_>>()?;
        let by_leading = cycles.iter().enumerate().map(|(k, z)| (z.leading, k)).collect();
        Ok(CycleTable { kh, cycles, by_leading })
    }

    pub fn is_reduced(&self) -> bool {
        self.kh.is_reduced()
    }

    pub fn cycle_of(&self, t: usize, variant: Variant) -> &FundamentalCycle {
        match variant {
            Variant::Plus if self.is_reduced() => &self.cycles[t],
            Variant::Plus => &self.cycles[2 * t],
            Variant::Minus => &self.cycles[2 * t + 1],
        }
    }

    /// `∂` of a chain in the standard basis of enhanced states.
    pub fn boundary(&self, chain: &[(Generator, i64)]) -> HashMap<Generator, i64> {
        let mut out: HashMap<Generator, i64> = HashMap::new();
        for &(g, c) in chain {
            for (h, v) in self.kh.differential(g) {
                *out.entry(h).or_insert(0) += c * v;
            }
        }
        out.retain(|_, v| *v != 0);
        out
    }

    /// Rewrites a vector in the basis where each cycle replaces its leading
    /// summand. The cycle's coefficient sits at its leading generator.
    pub fn to_cycle_basis(&self, mut w: HashMap<Generator, i64>) -> HashMap<Generator, i64> {
        let hits: Vec<(usize, i64)> = w.iter().filter_map(|(g, &c)| self.by_leading.get(g).map(|&k| (k, c))).collect();
        for (k, a) in hits {
            for &(h, z) in &self.cycles[k].terms {
                if h != self.cycles[k].leading {
                    *w.entry(h).or_insert(0) -= a * z;
                }
            }
        }
        w.retain(|_, v| *v != 0);
        w
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_pd;
    use crate::fixtures;
    use proptest::prelude::*;

    #[test]
    fn round_unknot_cycle_is_the_plus_circle() {
        let model = TreeModel::from_diagram(&crate::diagram::Diagram::round_unknot()).unwrap();
        let table = CycleTable::new(&model, true).unwrap();
        assert_eq!(table.cycles.len(), 1);
        assert_eq!(table.cycles[0].terms, vec![(Generator { markers: 0, signs: 1 }, 1)]);
    }

    #[test]
    fn positive_twist_gives_two_terms_from_minus() {
        // A one-crossing unknot; its only tree keeps the crossing live.
        for text in ["X 1 1 2 2\n", "X 1 2 2 1\n"] {
            let model = TreeModel::from_diagram(&parse_pd(text).unwrap()).unwrap();
            assert_eq!(model.tree_count(), 1);
            let table = CycleTable::new(&model, false).unwrap();
            let plus = table.cycle_of(0, Variant::Plus);
            let minus = table.cycle_of(0, Variant::Minus);
            if plus.markers == 0 {
                // A-type twist: x+ s+ and x- s+ - x+ s-.
                assert_eq!(plus.terms.len(), 1);
                assert_eq!(minus.terms.len(), 2);
                assert_eq!(minus.terms.iter().map(|t| t.1).sum::<i64>(), 0);
            } else {
                assert_eq!((plus.terms.len(), minus.terms.len()), (1, 1));
            }
        }
    }

    /// The cycle is closed under the differential restricted to its own
    /// twisted unknot, i.e. to live marker changes.
    fn check_cycles(name: &str, reduced: bool) {
        let model = TreeModel::from_diagram(&fixtures::diagram(name)).unwrap();
        let table = CycleTable::new(&model, reduced).unwrap();
        for z in &table.cycles {
            let live = model.live_mask(z.tree);
            let mut acc: HashMap<Generator, i64> = HashMap::new();
            for &(g, c) in &z.terms {
                assert!(table.kh.contains(g));
                for (h, v) in table.kh.differential_at(g, live) {
                    *acc.entry(h).or_insert(0) += c * v;
                }
            }
            assert!(acc.values().all(|&v| v == 0), "{name}: tree {} {:?}", z.tree, z.variant);
        }
    }

    #[test]
    fn cycles_are_cycles_in_their_twisted_unknot() {
        for name in ["3_1", "4_1", "6_2", "7_7", "8_19"] {
            check_cycles(name, true);
            check_cycles(name, false);
        }
    }

    #[test]
    fn figure8_cycle_markers_follow_the_words() {
        let model = TreeModel::from_graph(&fixtures::figure8_graph()).unwrap();
        let table = CycleTable::new(&model, true).unwrap();
        // T1 = LLdd: markers B B B B.
        assert_eq!(table.cycles[0].markers, 0b1111);
        assert_eq!(model.smoothing(0).to_string(), "**BB");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn twist_order_does_not_matter(seed in 0u64..1000, pick in 0usize..6) {
            let name = ["4_1", "5_2", "6_1", "6_3", "7_4", "8_5"][pick];
            let model = TreeModel::from_diagram(&fixtures::diagram(name)).unwrap();
            let table = CycleTable::new(&model, false).unwrap();
            let mut order: Vec<usize> = (0..model.crossing_count()).collect();
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            order.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            for z in &table.cycles {
                let other = fundamental_cycle_in_order(&model, &table.kh, z.tree, z.variant, &order).unwrap();
                prop_assert_eq!(&other, z);
            }
        }
    }
}
