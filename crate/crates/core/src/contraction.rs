//! Node contraction: merging original nodes into observed (ambiguous) nodes.
//!
//! [`sample_contraction`] manufactures ambiguous graphs with ground truth by
//! merging random node pairs, and records which neighbors each merged node
//! inherited from which original.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Redraws allowed when the sampled partner of a kept node is adjacent to it.
const MAX_PAIR_RETRIES: usize = 64;

/// Surjection from original node ids onto contracted ids `0..n̂`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionMap {
    mapping: Vec<usize>,
    inverse: Vec<Vec<usize>>,
}

impl ContractionMap {
    /// Validates that `mapping` hits every id in `0..=max(mapping)`.
    pub fn new(mapping: Vec<usize>) -> Result<Self> {
        let target = mapping.iter().map(|&c| c + 1).max().unwrap_or(0);
        let mut inverse = vec![Vec::new(); target];
        for (v, &c) in mapping.iter().enumerate() {
            inverse[c].push(v);
        }
        if let Some(missing) = inverse.iter().position(Vec::is_empty) {
            return Err(Error::InvalidInput(format!(
                "contraction is not surjective: contracted id {missing} has no preimage"
            )));
        }
        Ok(ContractionMap { mapping, inverse })
    }

    pub fn identity(n: usize) -> Self {
        ContractionMap {
            mapping: (0..n).collect(),
            inverse: (0..n).map(|v| vec![v]).collect(),
        }
    }

    /// Contracted id of original node `v`.
    pub fn image(&self, v: usize) -> usize {
        self.mapping[v]
    }

    /// Original nodes merged into contracted node `i`; the first entry is the representative.
    pub fn preimage(&self, i: usize) -> &[usize] {
        &self.inverse[i]
    }

    pub fn multiplicity(&self, i: usize) -> usize {
        self.inverse[i].len()
    }

    pub fn original_count(&self) -> usize {
        self.mapping.len()
    }

    pub fn contracted_count(&self) -> usize {
        self.inverse.len()
    }

    pub fn mapping(&self) -> &[usize] {
        &self.mapping
    }
}

/// Applies a contraction. Edges between merged originals vanish and parallel images collapse.
///
/// Each contracted node takes the label of its representative original.
pub fn contract(g: &Graph, c: &ContractionMap) -> Result<Graph> {
    if c.original_count() != g.node_count() {
        return Err(Error::DimensionMismatch {
            expected: g.node_count(),
            actual: c.original_count(),
        });
    }
    let labels = (0..c.contracted_count())
        .map(|i| g.label(c.preimage(i)[0]).to_string())
        .collect();
    let edges = g.edges().map(|(k, l)| (c.image(k), c.image(l)));
    Graph::with_labels(labels, edges)
}

/// Contracted-graph neighborhood of a merged node, split by which original contributed it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruthPartition {
    pub node: usize,
    /// Neighbors reached only through the kept original.
    pub kept: Vec<usize>,
    /// Neighbors reached only through the absorbed original.
    pub absorbed: Vec<usize>,
    /// Neighbors adjacent to both originals.
    pub shared: Vec<usize>,
}

impl TruthPartition {
    pub fn neighborhood_size(&self) -> usize {
        self.kept.len() + self.absorbed.len() + self.shared.len()
    }
}

#[derive(Clone, Debug)]
pub struct ContractionRecord {
    pub contracted_graph: Graph,
    pub map: ContractionMap,
    /// `(kept_original, absorbed_original)` pairs.
    pub merge_pairs: Vec<(usize, usize)>,
    /// Per contracted node: 1 when it merges two originals.
    pub truth_labels: Vec<u8>,
    /// One entry per ambiguous node, ordered by contracted id.
    pub truth_partitions: Vec<TruthPartition>,
}

impl ContractionRecord {
    pub fn ambiguous_count(&self) -> usize {
        self.truth_partitions.len()
    }

    pub fn partition_of(&self, node: usize) -> Option<&TruthPartition> {
        self.truth_partitions
            .binary_search_by_key(&node, |p| p.node)
            .ok()
            .map(|k| &self.truth_partitions[k])
    }

    pub fn to_document(&self) -> RecordDocument {
        RecordDocument {
            mapping: self.map.mapping().to_vec(),
            merge_pairs: self.merge_pairs.iter().map(|&(a, b)| [a, b]).collect(),
            truth_labels: self.truth_labels.clone(),
            truth_partitions: self.truth_partitions.clone(),
            labels: self.contracted_graph.labels().to_vec(),
        }
    }
}

/// On-disk JSON form of a [`ContractionRecord`]; ids are dense integers of the
/// original (`mapping`, `merge_pairs`) or contracted graph (everything else).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecordDocument {
    pub mapping: Vec<usize>,
    pub merge_pairs: Vec<[usize; 2]>,
    pub truth_labels: Vec<u8>,
    pub truth_partitions: Vec<TruthPartition>,
    /// External label of each contracted node, used to realign ids after reloading an edge list.
    pub labels: Vec<String>,
}

impl RecordDocument {
    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        fs::write(path, text).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// Number of merge pairs for ratio `r` on `n` nodes: `⌊r·n⌋`.
///
/// A relative slack of 1e-9 absorbs representation error such as `0.29 * 100 = 28.999…`.
pub fn merge_count(n: usize, r: f64) -> usize {
    let raw = r * n as f64;
    (raw + 1e-9 * raw.max(1.0)).floor() as usize
}

/// Merges `⌊r·n⌋` random node pairs into single nodes.
///
/// Kept nodes and their partners are drawn without replacement. A partner
/// adjacent to its kept node is redrawn up to a bounded number of times before
/// being accepted (its connecting edge then disappears). Deterministic per seed.
pub fn sample_contraction(g: &Graph, r: f64, seed: u64) -> Result<ContractionRecord> {
    if !(0.0..0.5).contains(&r) {
        return Err(Error::InvalidInput(format!(
            "contraction ratio {r} outside [0, 0.5)"
        )));
    }
    let n = g.node_count();
    let m = merge_count(n, r);
    if 2 * m > n {
        return Err(Error::InvalidInput(format!(
            "cannot draw 2 x {m} distinct nodes from a graph with {n} nodes"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let kept: Vec<usize> = order[..m].to_vec();
    let mut pool: Vec<usize> = order[m..].to_vec();

    let mut merge_pairs = Vec::with_capacity(m);
    for &k in &kept {
        let mut pick = rng.random_range(0..pool.len());
        for _ in 0..MAX_PAIR_RETRIES {
            if !g.has_edge(k, pool[pick]) {
                break;
            }
            pick = rng.random_range(0..pool.len());
        }
        let absorbed = pool.swap_remove(pick);
        merge_pairs.push((k, absorbed));
    }

    let mut absorbed_into = vec![usize::MAX; n];
    for &(k, a) in &merge_pairs {
        absorbed_into[a] = k;
    }
    let mut mapping = vec![usize::MAX; n];
    let mut next = 0;
    for v in 0..n {
        if absorbed_into[v] == usize::MAX {
            mapping[v] = next;
            next += 1;
        }
    }
    for v in 0..n {
        if absorbed_into[v] != usize::MAX {
            mapping[v] = mapping[absorbed_into[v]];
        }
    }

    // Representative (kept) original first in each preimage list.
    let mut inverse: Vec<Vec<usize>> = vec![Vec::new(); next];
    for v in 0..n {
        if absorbed_into[v] == usize::MAX {
            inverse[mapping[v]].push(v);
        }
    }
    for &(_, a) in &merge_pairs {
        inverse[mapping[a]].push(a);
    }
    let map = ContractionMap { mapping, inverse };
    let contracted_graph = contract(g, &map)?;

    let mut truth_labels = vec![0u8; next];
    let mut truth_partitions = Vec::with_capacity(m);
    for &(k, a) in &merge_pairs {
        let node = map.image(k);
        truth_labels[node] = 1;
        let image_set = |v: usize| -> BTreeSet<usize> {
            g.neighbors(v)
                .iter()
                .map(|&w| map.image(w))
                .filter(|&w| w != node)
                .collect()
        };
        let from_kept = image_set(k);
        let from_absorbed = image_set(a);
        truth_partitions.push(TruthPartition {
            node,
            kept: from_kept.difference(&from_absorbed).copied().collect(),
            absorbed: from_absorbed.difference(&from_kept).copied().collect(),
            shared: from_kept.intersection(&from_absorbed).copied().collect(),
        });
    }
    truth_partitions.sort_by_key(|p| p.node);

    Ok(ContractionRecord {
        contracted_graph,
        map,
        merge_pairs,
        truth_labels,
        truth_partitions,
    })
}
