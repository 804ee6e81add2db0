//! Khovanov complexes of enhanced Kauffman states and their homology.
//!
//! Conventions: a marker bit set means a B-smoothing. A loop's enhancement
//! bit set means `+`, which plays the role of `X` in `Z[X]/X^2` (so `+`
//! times `+` is zero). Loops of a state are numbered by their smallest arc.

mod complex;
mod groups;

pub use complex::{Generator, KhComplex};
pub use groups::{bigraded_homology, block_homology, check_d_squared, homology, BigradedGroups, Group};

use crate::diagram::Diagram;
use crate::poly::{PolyA, PolyT};
use crate::trees::normalize_jones;

/// Slot pairs joined by the A- and B-smoothing of a crossing.
pub const A_PAIRS: [[u8; 2]; 2] = [[0, 1], [2, 3]];
pub const B_PAIRS: [[u8; 2]; 2] = [[1, 2], [3, 0]];

/// Loops of a Kauffman state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Loops {
    pub count: usize,
    /// Loop index of every arc.
    pub arc_loop: Vec<usize>,
}

/// The loop partition of the state with the given markers (`true` = B).
pub fn loops(d: &Diagram, markers_b: &[bool]) -> Loops {
    let m = d.arc_count();
    if d.is_round_unknot() {
        return Loops {
            count: 1,
            arc_loop: vec![0; m],
        };
    }
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            p[r] = p[p[r]];
            r = p[r];
        }
        r
    }
    for c in 0..d.crossing_count() {
        let x = d.crossing(c);
        let pairs = if markers_b[c] { B_PAIRS } else { A_PAIRS };
        for [s, t] in pairs {
            let (a, b) = (find(&mut parent, x[s as usize]), find(&mut parent, x[t as usize]));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut label = vec![usize::MAX; m];
    let mut arc_loop = vec![0; m];
    let mut count = 0;
    for a in 0..m {
        let r = find(&mut parent, a);
        if label[r] == usize::MAX {
            label[r] = count;
            count += 1;
        }
        arc_loop[a] = label[r];
    }
    Loops { count, arc_loop }
}

/// Markers of state `s` (bit `c` set = B) as a vector.
pub fn marker_vec(s: u64, n: usize) -> Vec<bool> {
    (0..n).map(|c| s >> c & 1 == 1).collect()
}

/// Kauffman bracket by the full state sum, normalized so that the round
/// unknot has bracket 1.
pub fn bracket_state_sum(d: &Diagram) -> PolyA {
    let n = d.crossing_count();
    let delta = PolyA::from_terms([(-2, -1), (2, -1)]);
    let mut by_loops: Vec<PolyA> = Vec::new();
    let mut total = PolyA::zero();
    for s in 0..1u64 << n {
        let k = loops(d, &marker_vec(s, n)).count;
        while by_loops.len() < k {
            let p = by_loops.last().map(|p| p * &delta).unwrap_or_else(PolyA::one);
            by_loops.push(p);
        }
        let b = s.count_ones() as i64;
        let sigma = n as i64 - 2 * b;
        total += &by_loops[k - 1].shift(sigma);
    }
    total
}

pub fn jones_state_sum(d: &Diagram) -> PolyT {
    normalize_jones(&bracket_state_sum(d), d.writhe())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_pd;
    use crate::fixtures;

    #[test]
    fn loop_counts() {
        let d = fixtures::diagram("4_1");
        assert_eq!(loops(&d, &[false; 4]).count, 3);
        assert_eq!(loops(&Diagram::round_unknot(), &[]).count, 1);
        let pos = parse_pd("X 1 1 2 2\n").unwrap();
        let neg = parse_pd("X 1 2 2 1\n").unwrap();
        assert_eq!((loops(&pos, &[false]).count, loops(&pos, &[true]).count), (2, 1));
        assert_eq!((loops(&neg, &[false]).count, loops(&neg, &[true]).count), (1, 2));
    }

    #[test]
    fn kinks_have_unit_jones() {
        for text in ["X 1 1 2 2\n", "X 1 2 2 1\n"] {
            assert_eq!(jones_state_sum(&parse_pd(text).unwrap()), PolyT::one());
        }
    }

    #[test]
    fn state_sum_matches_known_jones() {
        let v = jones_state_sum(&fixtures::diagram("4_1"));
        assert_eq!(v, PolyT::from_terms([(-4, 1), (-2, -1), (0, 1), (2, -1), (4, 1)]));
        let left = jones_state_sum(&fixtures::diagram("3_1"));
        assert_eq!(left, PolyT::from_terms([(-8, -1), (-6, 1), (-2, 1)]));
    }

    fn table(d: &Diagram, reduced: bool) -> String {
        let c = KhComplex::new(d, reduced);
        assert!(check_d_squared(&c));
        homology(&c).unwrap().to_table()
    }

    #[test]
    fn trefoil_homology() {
        let right = fixtures::diagram("trefoil_right");
        let expected = "   0    1  Z^1\n   0    3  Z^1\n   2    5  Z^1\n   3    7  Z^0 + Z/2\n   3    9  Z^1\n";
        assert_eq!(table(&right, false), expected);
        assert_eq!(table(&right, true), "   0    1  Z^1\n   2    5  Z^1\n   3    7  Z^1\n");
    }

    #[test]
    fn figure_eight_homology() {
        let d = fixtures::diagram("4_1");
        let t = table(&d, false);
        let expected = [
            "  -2   -5  Z^1",
            "  -1   -3  Z^0 + Z/2",
            "  -1   -1  Z^1",
            "   0   -1  Z^1",
            "   0    1  Z^1",
            "   1    1  Z^1",
            "   2    3  Z^0 + Z/2",
            "   2    5  Z^1",
        ];
        assert_eq!(t.lines().collect::<Vec<_>>(), expected);
    }
}
