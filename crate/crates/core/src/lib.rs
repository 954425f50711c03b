//! Identification and splitting of ambiguous nodes in undirected graphs.
//!
//! Graphs are embedded with Conditional Network Embedding; each node is then
//! scored by how strongly its neighborhood pulls in two directions.

// `!(x > 0.0)` style checks reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod baselines;
pub mod cne;
pub mod contraction;
pub mod error;
pub mod experiment;
pub mod fixtures;
pub mod fondue;
pub mod graph;
pub mod metrics;
pub mod scores;
pub mod seed;
pub mod synth;

pub use error::{Error, Result};
pub use graph::Graph;
