//! Small graphs bundled with the library.

use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{parse_edge_list, Graph};

const LESMIS: &str = include_str!("../data/lesmis.txt");
const DCSBM105: &str = include_str!("../data/dcsbm105.txt");

/// Names accepted by [`bundled`].
pub const BUNDLED: [&str; 2] = ["lesmis", "dcsbm105"];

/// Les Misérables character co-appearance network: 77 nodes, 254 edges.
pub fn lesmis() -> Graph {
    parse_edge_list(LESMIS, Path::new("lesmis.txt"))
        .expect("bundled edge list parses")
        .graph
}

/// Degree-corrected three-block stochastic block model: 105 nodes, 448 edges.
pub fn dcsbm105() -> Graph {
    parse_edge_list(DCSBM105, Path::new("dcsbm105.txt"))
        .expect("bundled edge list parses")
        .graph
}

pub fn bundled(name: &str) -> Result<Graph> {
    match name {
        "lesmis" => Ok(lesmis()),
        "dcsbm105" => Ok(dcsbm105()),
        other => Err(Error::InvalidInput(format!(
            "unknown bundled graph {other:?}; expected one of {BUNDLED:?}"
        ))),
    }
}
