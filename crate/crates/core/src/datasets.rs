//! Small public networks bundled with the crate.

use crate::graph::{parse_edge_list, Graph};
use crate::height::{energy_from_degree, make_injective, HeightFunction, TieBreak};

pub const KARATE_EDGES: &str = include_str!("../data/karate.edges");
/// Degree ties ordered so that 29 is the lowest degree-3 node, 26 sits
/// below 25 and 11 below 5.
pub const KARATE_TIEBREAK: &str = include_str!("../data/karate.tiebreak");
pub const LESMIS_EDGES: &str = include_str!("../data/lesmis.edges");
pub const LESMIS_LABELS: &str = include_str!("../data/lesmis.labels");
pub const FIG1_LEFT_EDGES: &str = include_str!("../data/fig1-left.edges");
pub const FIG1_RIGHT_EDGES: &str = include_str!("../data/fig1-right.edges");

/// Zachary's karate club (34 nodes, 78 edges), labels `"1"..="34"`.
pub fn karate() -> Graph {
    parse_edge_list(KARATE_EDGES, None, false).expect("bundled karate edge list")
}

pub fn karate_tiebreak(g: &Graph) -> TieBreak {
    TieBreak::parse_permutation(g, KARATE_TIEBREAK).expect("bundled karate permutation")
}

/// Karate with `h = -ln(degree)` and the bundled tie-break permutation.
pub fn karate_landscape() -> (Graph, HeightFunction) {
    let g = karate();
    let base = energy_from_degree(&g).expect("karate has no isolated nodes");
    let h = make_injective(&base, &karate_tiebreak(&g)).expect("finite energies");
    (g, h)
}

/// Les Misérables character co-occurrence network (77 nodes, 254 weighted edges).
pub fn les_miserables() -> Graph {
    parse_edge_list(LESMIS_EDGES, Some(LESMIS_LABELS), false).expect("bundled les miserables data")
}

/// Five-node tree `1-3, 2-3, 3-5, 4-5`, meant to be used with `h(i) = i`.
pub fn fig1_left() -> Graph {
    parse_edge_list(FIG1_LEFT_EDGES, None, false).expect("bundled tree")
}

/// Seven-node tree `1-5, 2-5, 3-6, 4-6, 5-7, 6-7`, meant to be used with `h(i) = i`.
pub fn fig1_right() -> Graph {
    parse_edge_list(FIG1_RIGHT_EDGES, None, false).expect("bundled tree")
}
