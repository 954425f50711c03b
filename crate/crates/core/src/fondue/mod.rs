//! Ambiguity scoring and binary node splitting.
//!
//! A node whose neighbors sit in two separated regions of the embedding has a
//! large Rayleigh quotient `bᵀM_ib / bᵀb` for the sign vector `b` separating
//! them. The best quotient is the node's ambiguity score and `b` the proposed split.

mod heuristics;
mod quotient;

use std::fs;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use heuristics::{
    combined_heuristic, eigenvector_threshold_heuristic, exhaustive, power_iteration,
    random_split_heuristic, HeuristicConfig, PowerIteration, SplitMethod, SplitResult,
    MAX_EXHAUSTIVE,
};
pub use quotient::{build_quotient_matrix, rayleigh_quotient, QuotientMatrix, SplitVector};

use crate::cne::{fit_embedding, CneParams, Embedding};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::scores::{ScoreRow, ScoreTable};
use crate::seed::derive_seed;

/// Method tag for nodes with fewer than two neighbors.
pub const DEGENERATE: &str = "degenerate";

fn node_config(cfg: &HeuristicConfig, i: usize) -> HeuristicConfig {
    HeuristicConfig {
        seed: derive_seed(cfg.seed, i as u64),
        ..cfg.clone()
    }
}

/// Exact search when the neighborhood is at most `exhaustive_cutoff`, the
/// combined heuristic otherwise. Heuristic seeds are derived from `(cfg.seed, i)`.
pub fn best_split(
    g: &Graph,
    emb: &Embedding,
    i: usize,
    cfg: &HeuristicConfig,
) -> Result<SplitResult> {
    let degree = g.degree(i);
    if degree < 2 {
        return Err(Error::Degenerate { node: i, degree });
    }
    let m = build_quotient_matrix(g, emb, i)?;
    if degree <= cfg.exhaustive_cutoff.min(MAX_EXHAUSTIVE) {
        exhaustive(&m, cfg.include_one_sided)
    } else {
        combined_heuristic(&m, &node_config(cfg, i))
    }
}

/// Scores every node by its best split value; nodes of degree below 2 score 0.
pub fn score_all_nodes(g: &Graph, emb: &Embedding, cfg: &HeuristicConfig) -> Result<ScoreTable> {
    if emb.node_count() != g.node_count() {
        return Err(Error::DimensionMismatch {
            expected: g.node_count(),
            actual: emb.node_count(),
        });
    }
    let rows = (0..g.node_count())
        .into_par_iter()
        .map(|i| {
            let degree = g.degree(i);
            if degree < 2 {
                return Ok(ScoreRow {
                    node: i,
                    score: 0.0,
                    method: DEGENERATE.into(),
                    degree,
                });
            }
            let split = best_split(g, emb, i, cfg)?;
            Ok(ScoreRow {
                node: i,
                score: split.value,
                method: split.method.as_str().into(),
                degree,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScoreTable { rows })
}

/// Replaces `i` by two nodes: `i` keeps the edges to `groups.0`, and a new
/// node with id `g.node_count()` takes the edges to `groups.1`.
///
/// The new node is labelled `"{label}#2"` (or the next free suffix).
pub fn apply_split(g: &Graph, i: usize, groups: (&[usize], &[usize])) -> Result<Graph> {
    let (first, second) = groups;
    if first.is_empty() || second.is_empty() {
        return Err(Error::InvalidInput(format!(
            "split of node {i} has an empty side"
        )));
    }
    let mut all: Vec<usize> = first.iter().chain(second).copied().collect();
    all.sort_unstable();
    let before = all.len();
    all.dedup();
    if all.len() != before {
        return Err(Error::InvalidInput(format!(
            "split groups of node {i} overlap"
        )));
    }
    if all != g.neighbors(i) {
        return Err(Error::InvalidInput(format!(
            "split groups of node {i} do not partition its neighborhood"
        )));
    }
    let n = g.node_count();
    let mut labels = g.labels().to_vec();
    let mut suffix = 2;
    let new_label = loop {
        let candidate = format!("{}#{suffix}", g.label(i));
        if g.id_of(&candidate).is_none() {
            break candidate;
        }
        suffix += 1;
    };
    labels.push(new_label);
    let moved: std::collections::HashSet<usize> = second.iter().copied().collect();
    let edges = g.edges().map(|(u, v)| {
        if u == i && moved.contains(&v) {
            (n, v)
        } else if v == i && moved.contains(&u) {
            (u, n)
        } else {
            (u, v)
        }
    });
    Graph::with_labels(labels, edges.collect::<Vec<_>>())
}

/// One greedy split, written as a JSON line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitLogEntry {
    pub node: String,
    pub value: f64,
    pub groups: [Vec<String>; 2],
}

pub fn write_json_lines<T: Serialize>(entries: &[T], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut out = Vec::new();
    for e in entries {
        serde_json::to_writer(&mut out, e)?;
        out.push(b'\n');
    }
    let mut file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    file.write_all(&out).map_err(|e| Error::io(path, e))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GreedyConfig {
    pub cne: CneParams,
    pub heuristics: HeuristicConfig,
    /// Stop once the best remaining score falls below this value.
    pub threshold: f64,
    /// Refit the embedding after every split instead of placing the new node at the old position.
    pub reembed: bool,
    pub seed: u64,
}

impl Default for GreedyConfig {
    fn default() -> Self {
        GreedyConfig {
            cne: CneParams::default(),
            heuristics: HeuristicConfig::default(),
            threshold: 0.0,
            reembed: false,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct GreedyOutcome {
    pub graph: Graph,
    pub embedding: Embedding,
    pub log: Vec<SplitLogEntry>,
}

/// Embeds `g`, then runs [`greedy_disambiguate_from`].
pub fn greedy_disambiguate(g: &Graph, cfg: &GreedyConfig, budget: usize) -> Result<GreedyOutcome> {
    let emb = fit_embedding(g, &cfg.cne, cfg.seed)?;
    greedy_disambiguate_from(g, emb, cfg, budget)
}

/// Repeatedly splits the highest-scoring node, up to `budget` splits.
pub fn greedy_disambiguate_from(
    g: &Graph,
    emb: Embedding,
    cfg: &GreedyConfig,
    budget: usize,
) -> Result<GreedyOutcome> {
    let mut graph = g.clone();
    let mut emb = emb;
    let mut log = Vec::new();
    for round in 0..budget {
        let table = score_all_nodes(&graph, &emb, &cfg.heuristics)?;
        let Some(top) = table
            .sorted_desc()
            .into_iter()
            .find(|r| r.method != DEGENERATE)
            .cloned()
        else {
            break;
        };
        if top.score < cfg.threshold {
            break;
        }
        let split = best_split(&graph, &emb, top.node, &cfg.heuristics)?;
        let (a, b) = &split.groups;
        let next = apply_split(&graph, top.node, (a, b))?;
        log.push(SplitLogEntry {
            node: graph.label(top.node).to_string(),
            value: split.value,
            groups: [
                a.iter().map(|&j| graph.label(j).to_string()).collect(),
                b.iter().map(|&j| graph.label(j).to_string()).collect(),
            ],
        });
        log::info!("split {} (score {:.6})", graph.label(top.node), split.value);
        if cfg.reembed {
            emb = fit_embedding(&next, &cfg.cne, derive_seed(cfg.seed, round as u64 + 1))?;
        } else {
            let point = emb.point(top.node).to_vec();
            emb.push_point(&point)?;
        }
        graph = next;
    }
    Ok(GreedyOutcome {
        graph,
        embedding: emb,
        log,
    })
}
