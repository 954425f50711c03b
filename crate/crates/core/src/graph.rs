//! Simple undirected graphs with dense node ids and external string labels.
//!
//! Node ids are always `0..n`. Every edge `{i, j}` is stored once with `i < j`
//! and adjacency lists are kept sorted, so neighbor lookups can binary search.

use std::collections::{HashMap, VecDeque};
use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    edge_count: usize,
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

/// Outcome of parsing an edge list, with the lines that were collapsed or dropped.
#[derive(Clone, Debug)]
pub struct ParsedEdgeList {
    pub graph: Graph,
    pub self_loops: usize,
    pub duplicates: usize,
}

impl Graph {
    /// Builds a graph on `n` nodes labelled `"0".."n-1"`.
    ///
    /// Self-loops are dropped and repeated pairs collapse to one edge.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let labels = (0..n).map(|i| i.to_string()).collect();
        Self::with_labels(labels, edges).expect("default labels are unique")
    }

    /// Builds a graph whose node `i` carries `labels[i]`.
    pub fn with_labels(
        labels: Vec<String>,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let n = labels.len();
        let mut index = HashMap::with_capacity(n);
        for (i, label) in labels.iter().enumerate() {
            if index.insert(label.clone(), i).is_some() {
                return Err(Error::InvalidInput(format!(
                    "duplicate node label {label:?}"
                )));
            }
        }
        let mut adjacency = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidInput(format!(
                    "edge ({u}, {v}) references a node outside 0..{n}"
                )));
            }
            if u == v {
                continue;
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        let mut edge_count = 0;
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
            edge_count += list.len();
        }
        Ok(Graph {
            adjacency,
            edge_count: edge_count / 2,
            labels,
            index,
        })
    }

    pub fn empty() -> Self {
        Graph::from_edges(0, [])
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Sorted neighbor list of `i`.
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].len()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i != j && self.adjacency[i].binary_search(&j).is_ok()
    }

    /// All edges as `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(i, list)| list.iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn id_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    /// Subgraph induced on `nodes` (which must be distinct); local id `k` corresponds to `nodes[k]`.
    pub fn induced_subgraph(&self, nodes: &[usize]) -> Graph {
        let local: HashMap<usize, usize> = nodes.iter().enumerate().map(|(k, &v)| (v, k)).collect();
        let mut edges = Vec::new();
        for (k, &v) in nodes.iter().enumerate() {
            for &w in self.neighbors(v) {
                if let Some(&l) = local.get(&w) {
                    if k < l {
                        edges.push((k, l));
                    }
                }
            }
        }
        let labels = nodes.iter().map(|&v| self.labels[v].clone()).collect();
        Graph::with_labels(labels, edges).expect("labels of a valid graph are unique")
    }

    /// Writes the graph as a whitespace-separated edge list using external labels.
    ///
    /// Isolated nodes have no line and are therefore not preserved.
    pub fn write_edge_list(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut out = Vec::new();
        for (i, j) in self.edges() {
            writeln!(out, "{} {}", self.labels[i], self.labels[j]).expect("write to Vec");
        }
        fs::write(path, out).map_err(|e| Error::io(path, e))
    }
}

/// Parses edge-list text: one `u v` pair per line, `#` starts a comment line.
///
/// Labels are assigned dense ids in order of first appearance. Self-loop lines
/// are dropped without registering their label.
pub fn parse_edge_list(text: &str, source: &Path) -> Result<ParsedEdgeList> {
    let mut labels: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut edges = Vec::new();
    let mut self_loops = 0;
    let mut intern = |label: &str, labels: &mut Vec<String>| -> usize {
        *index.entry(label.to_string()).or_insert_with(|| {
            labels.push(label.to_string());
            labels.len() - 1
        })
    };
    for (lineno, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(Error::Parse {
                path: source.to_path_buf(),
                line: lineno + 1,
                message: format!("expected 2 tokens, found {}", tokens.len()),
            });
        }
        if tokens[0] == tokens[1] {
            self_loops += 1;
            continue;
        }
        let u = intern(tokens[0], &mut labels);
        let v = intern(tokens[1], &mut labels);
        edges.push((u, v));
    }
    let raw = edges.len();
    let graph = Graph::with_labels(labels, edges)?;
    Ok(ParsedEdgeList {
        duplicates: raw - graph.edge_count(),
        graph,
        self_loops,
    })
}

/// Reads an edge-list file, logging a warning when self-loop lines were dropped.
pub fn load_edge_list(path: impl AsRef<Path>) -> Result<Graph> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let parsed = parse_edge_list(&text, path)?;
    if parsed.self_loops > 0 {
        log::warn!(
            "{}: dropped {} self-loop line(s)",
            path.display(),
            parsed.self_loops
        );
    }
    Ok(parsed.graph)
}

/// Ego network of a node together with the map from local ids back to the parent graph.
#[derive(Clone, Debug)]
pub struct EgoNetwork {
    pub graph: Graph,
    /// `members[k]` is the parent-graph id of local node `k`.
    pub members: Vec<usize>,
}

/// Subgraph induced on the neighbors of `i`, plus `i` itself when `include_center` is set.
pub fn ego_network(g: &Graph, i: usize, include_center: bool) -> EgoNetwork {
    let mut members: Vec<usize> = g.neighbors(i).to_vec();
    if include_center {
        let pos = members.binary_search(&i).unwrap_err();
        members.insert(pos, i);
    }
    EgoNetwork {
        graph: g.induced_subgraph(&members),
        members,
    }
}

/// Connected components, each sorted ascending, ordered by their smallest node.
pub fn connected_components(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.node_count();
    let mut seen = vec![false; n];
    let mut components = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        queue.push_back(start);
        let mut component = Vec::new();
        while let Some(v) = queue.pop_front() {
            component.push(v);
            for &w in g.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        component.sort_unstable();
        components.push(component);
    }
    components
}
