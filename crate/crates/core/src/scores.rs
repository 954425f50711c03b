//! Per-node ambiguity scores shared by FONDUE and the baselines.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScoreRow {
    pub node: usize,
    pub score: f64,
    pub method: String,
    pub degree: usize,
}

/// One row per node, in node-id order.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ScoreTable {
    pub rows: Vec<ScoreRow>,
}

impl ScoreTable {
    pub fn scores(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.score).collect()
    }

    /// Rows ordered by descending score, ties by node id.
    pub fn sorted_desc(&self) -> Vec<&ScoreRow> {
        let mut rows: Vec<&ScoreRow> = self.rows.iter().collect();
        rows.sort_by(|a, b| b.score.total_cmp(&a.score).then(a.node.cmp(&b.node)));
        rows
    }

    /// 0-based position of `node` in [`sorted_desc`](Self::sorted_desc).
    pub fn rank_of(&self, node: usize) -> Option<usize> {
        self.sorted_desc().iter().position(|r| r.node == node)
    }

    /// Writes `node,score,method,degree` with external labels in the node column.
    pub fn write_csv(&self, path: impl AsRef<Path>, graph: &Graph) -> Result<()> {
        let path = path.as_ref();
        let mut writer = csv::Writer::from_path(path)?;
        writer.write_record(["node", "score", "method", "degree"])?;
        for row in &self.rows {
            writer.write_record([
                graph.label(row.node).to_string(),
                format!("{:.16e}", row.score),
                row.method.clone(),
                row.degree.to_string(),
            ])?;
        }
        writer.flush().map_err(|e| Error::io(path, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(node: usize, score: f64) -> ScoreRow {
        ScoreRow {
            node,
            score,
            method: "degree".into(),
            degree: 0,
        }
    }

    #[test]
    fn sorting_breaks_ties_by_node() {
        let t = ScoreTable {
            rows: vec![row(0, 1.0), row(1, 3.0), row(2, 1.0)],
        };
        let order: Vec<usize> = t.sorted_desc().iter().map(|r| r.node).collect();
        assert_eq!(order, [1, 0, 2]);
        assert_eq!(t.rank_of(2), Some(2));
    }

    #[test]
    fn csv_has_header() {
        let g = Graph::from_edges(1, []);
        let t = ScoreTable {
            rows: vec![row(0, 0.5)],
        };
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.csv");
        t.write_csv(&path, &g).unwrap();
        let text = std::fs::read_to_string(path).unwrap();
        assert_eq!(
            text,
            "node,score,method,degree\n0,5.0000000000000000e-1,degree,0\n"
        );
    }
}
