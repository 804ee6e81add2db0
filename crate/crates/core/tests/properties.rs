//! Invariants on seeded random signed plane graphs.

use khtree::diagram::medial;
use khtree::error::Error;
use khtree::khovanov::{bracket_state_sum, check_d_squared, homology, KhComplex};
use khtree::matroid::{apply_flip, colored_matroid, two_flip_sides, FlipMove};
use khtree::random::{random_plane_graph, Signs};
use khtree::tree_complex::{
    classify_direct, collapse_to_tree_complex, direct_incidence, fundamental_cycle, fundamental_cycle_in_order, CycleTable, TreeModel, Variant,
};
use khtree::trees::bracket_by_trees;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn graph(seed: u64, edges: usize) -> khtree::diagram::SignedPlanarGraph {
    random_plane_graph(&mut ChaCha8Rng::seed_from_u64(seed), edges, Signs::Mixed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn tree_sum_matches_state_sum(seed in any::<u64>(), edges in 1usize..=9) {
        let g = graph(seed, edges);
        prop_assert_eq!(bracket_by_trees(&g).unwrap(), bracket_state_sum(&medial(&g)));
    }

    #[test]
    fn differentials_square_to_zero(seed in any::<u64>(), edges in 1usize..=7) {
        let d = medial(&graph(seed, edges));
        let m = TreeModel::from_diagram(&d).unwrap();
        for reduced in [false, true] {
            prop_assert!(check_d_squared(&KhComplex::new(&d, reduced)));
            let c = collapse_to_tree_complex(&m, reduced).unwrap();
            prop_assert!(c.is_complex());
            prop_assert_eq!(c.homology().unwrap(), homology(&KhComplex::new(&d, reduced)).unwrap());
        }
    }

    #[test]
    fn cycles_ignore_untwisting_order(seed in any::<u64>(), edges in 1usize..=7) {
        let d = medial(&graph(seed, edges));
        let m = TreeModel::from_diagram(&d).unwrap();
        let kh = KhComplex::new(&d, false);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let mut order: Vec<usize> = (0..m.crossing_count()).collect();
        for t in 0..m.tree_count() {
            order.shuffle(&mut rng);
            for variant in [Variant::Plus, Variant::Minus] {
                let a = fundamental_cycle(&m, &kh, t, variant).unwrap();
                let b = fundamental_cycle_in_order(&m, &kh, t, variant, &order).unwrap();
                prop_assert_eq!(a.terms, b.terms);
            }
        }
    }

    #[test]
    fn incidence_follows_word_patterns(seed in any::<u64>(), edges in 1usize..=6) {
        let m = TreeModel::from_graph(&graph(seed, edges)).unwrap();
        let table = CycleTable::new(&m, true).unwrap();
        for a in 0..m.tree_count() {
            for b in 0..m.tree_count() {
                let x = direct_incidence(&table, a, b);
                prop_assert!(x.abs() <= 1);
                prop_assert_eq!(x != 0, classify_direct(&m.words[a], &m.words[b]).unwrap());
            }
        }
    }

    #[test]
    fn flips_preserve_the_colored_matroid(seed in any::<u64>(), edges in 3usize..=10) {
        let g = graph(seed, edges);
        let before = colored_matroid(&g).unwrap();
        for (u, v, side) in two_flip_sides(&g) {
            // Sides nested around other pieces cannot be turned in the plane.
            match apply_flip(&g, &FlipMove::TwoFlip { u, v, edges: side }) {
                Ok(h) => prop_assert_eq!(colored_matroid(&h).unwrap(), before.clone()),
                Err(e) => prop_assert!(matches!(e, Error::InvalidFlip(_)), "{e}"),
            }
        }
    }
}
