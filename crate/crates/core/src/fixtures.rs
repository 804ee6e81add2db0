//! Knot diagrams and graphs shipped with the crate.

use crate::diagram::{parse_pd, Diagram, SignedPlanarGraph};

/// PD codes by name, in increasing crossing number.
pub const KNOTS: &[(&str, &str)] = &[
    ("3_1", include_str!("../fixtures/3_1.pd")),
    ("trefoil_right", include_str!("../fixtures/trefoil_right.pd")),
    ("4_1", include_str!("../fixtures/4_1.pd")),
    ("5_1", include_str!("../fixtures/5_1.pd")),
    ("5_2", include_str!("../fixtures/5_2.pd")),
    ("6_1", include_str!("../fixtures/6_1.pd")),
    ("6_2", include_str!("../fixtures/6_2.pd")),
    ("6_3", include_str!("../fixtures/6_3.pd")),
    ("7_4", include_str!("../fixtures/7_4.pd")),
    ("7_7", include_str!("../fixtures/7_7.pd")),
    ("8_5", include_str!("../fixtures/8_5.pd")),
    ("8_17", include_str!("../fixtures/8_17.pd")),
    ("8_19", include_str!("../fixtures/8_19.pd")),
    ("8_20", include_str!("../fixtures/8_20.pd")),
    ("8_21", include_str!("../fixtures/8_21.pd")),
    ("9_42", include_str!("../fixtures/9_42.pd")),
    ("9_46", include_str!("../fixtures/9_46.pd")),
    ("10_124", include_str!("../fixtures/10_124.pd")),
    ("10_132", include_str!("../fixtures/10_132.pd")),
    ("10_161", include_str!("../fixtures/10_161.pd")),
    ("11n34", include_str!("../fixtures/11n34.pd")),
    ("11n42", include_str!("../fixtures/11n42.pd")),
];

/// Signed plane graph of the figure-eight knot with its usual edge order.
pub const FIGURE8_GRAPH: &str = include_str!("../fixtures/figure8.graph");

/// The Kinoshita-Terasaka knot and its mutant, the Conway knot.
pub const KINOSHITA_TERASAKA: &str = "11n42";
pub const CONWAY: &str = "11n34";

/// A 2-separation `(u, v, side edges)` of the Kinoshita-Terasaka Tait graph
/// (canonical coloring, 0-based) whose 2-flip gives the Conway knot's.
pub const KT_CONWAY_FLIP: (usize, usize, &[usize]) = (1, 2, &[5, 6, 7, 8, 9, 10]);

pub fn pd_text(name: &str) -> Option<&'static str> {
    KNOTS.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

/// Parses a shipped diagram; panics on an unknown name.
pub fn diagram(name: &str) -> Diagram {
    let text = pd_text(name).unwrap_or_else(|| panic!("no fixture named {name}"));
    parse_pd(text).expect("fixtures parse")
}

pub fn figure8_graph() -> SignedPlanarGraph {
    SignedPlanarGraph::parse(FIGURE8_GRAPH).expect("fixture parses")
}

/// Named fixture knots with at most `max_crossings` crossings.
pub fn knots_up_to(max_crossings: usize) -> Vec<(&'static str, Diagram)> {
    KNOTS
        .iter()
        .map(|(n, _)| (*n, diagram(n)))
        .filter(|(_, d)| d.crossing_count() <= max_crossings)
        .collect()
}
