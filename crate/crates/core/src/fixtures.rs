//! Diagrams shipped with the crate, parsed from `fixtures/*.graph`.

use crate::graph::PlumbingGraph;
use crate::io::parse_graph;

pub const D2: &str = include_str!("../fixtures/d2.graph");
pub const D3: &str = include_str!("../fixtures/d3.graph");
pub const D4: &str = include_str!("../fixtures/d4.graph");
pub const E8: &str = include_str!("../fixtures/e8.graph");
pub const SIGMA_3_13_23: &str = include_str!("../fixtures/sigma-3-13-23.graph");

fn load(name: &str, src: &str) -> PlumbingGraph {
    parse_graph(src).unwrap_or_else(|e| panic!("shipped fixture {name} is malformed: {e}"))
}

/// Expanded star plumbing of Σ(5,9,13).
pub fn d2() -> PlumbingGraph {
    load("d2", D2)
}

/// The post-handle diagram that reduces to [`d4`].
pub fn d3() -> PlumbingGraph {
    load("d3", D3)
}

/// `(-2)—(0)`.
pub fn d4() -> PlumbingGraph {
    load("d4", D4)
}

pub fn e8() -> PlumbingGraph {
    load("e8", E8)
}

pub fn sigma_3_13_23() -> PlumbingGraph {
    load("sigma-3-13-23", SIGMA_3_13_23)
}

/// Every fixture with its file stem.
pub fn all() -> Vec<(&'static str, PlumbingGraph)> {
    vec![
        ("d2", d2()),
        ("d3", d3()),
        ("d4", d4()),
        ("e8", e8()),
        ("sigma-3-13-23", sigma_3_13_23()),
    ]
}
