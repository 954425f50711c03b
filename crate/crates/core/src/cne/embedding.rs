use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::CneParams;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Node coordinates (row-major, one row of width `dim` per node) and the
/// settings that produced them.
#[derive(Clone, Debug, PartialEq)]
pub struct Embedding {
    coords: Vec<f64>,
    dim: usize,
    params: CneParams,
    pub objective_value: f64,
    /// Final objective of every restart that did not diverge, in restart order.
    pub restart_objectives: Vec<f64>,
    pub diverged_restarts: usize,
    /// Accepted objective values of the selected restart, starting with its initial value.
    pub history: Vec<f64>,
    pub seed: u64,
}

/// Sidecar metadata written next to an embedding CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingSidecar {
    pub params: CneParams,
    pub seed: u64,
    pub objective_value: f64,
    pub restart_objectives: Vec<f64>,
    pub diverged_restarts: usize,
}

impl Embedding {
    pub fn from_coords(coords: Vec<f64>, dim: usize, params: CneParams) -> Result<Self> {
        if dim == 0 || !coords.len().is_multiple_of(dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: coords.len(),
            });
        }
        if coords.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("embedding coordinates"));
        }
        let params = CneParams { dim, ..params };
        Ok(Embedding {
            coords,
            dim,
            params,
            objective_value: f64::NAN,
            restart_objectives: Vec::new(),
            diverged_restarts: 0,
            history: Vec::new(),
            seed: 0,
        })
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn params(&self) -> &CneParams {
        &self.params
    }

    pub fn node_count(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    /// Appends a node at the given position, returning its id.
    pub fn push_point(&mut self, point: &[f64]) -> Result<usize> {
        if point.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: point.len(),
            });
        }
        self.coords.extend_from_slice(point);
        Ok(self.node_count() - 1)
    }

    pub fn sidecar_path(csv_path: &Path) -> PathBuf {
        let mut name = csv_path.as_os_str().to_owned();
        name.push(".params.json");
        PathBuf::from(name)
    }

    /// Writes `node,x0,…` rows with 17 significant digits, plus a `.params.json` sidecar.
    pub fn write_csv(&self, path: impl AsRef<Path>, graph: &Graph) -> Result<()> {
        let path = path.as_ref();
        if graph.node_count() != self.node_count() {
            return Err(Error::DimensionMismatch {
                expected: graph.node_count(),
                actual: self.node_count(),
            });
        }
        let mut writer = csv::Writer::from_path(path)?;
        let mut header = vec!["node".to_string()];
        header.extend((0..self.dim).map(|k| format!("x{k}")));
        writer.write_record(&header)?;
        for i in 0..self.node_count() {
            let mut row = vec![graph.label(i).to_string()];
            row.extend(self.point(i).iter().map(|v| format!("{v:.16e}")));
            writer.write_record(&row)?;
        }
        writer.flush().map_err(|e| Error::io(path, e))?;

        let sidecar = EmbeddingSidecar {
            params: self.params.clone(),
            seed: self.seed,
            objective_value: self.objective_value,
            restart_objectives: self.restart_objectives.clone(),
            diverged_restarts: self.diverged_restarts,
        };
        let side_path = Self::sidecar_path(path);
        let mut text = serde_json::to_string_pretty(&sidecar)?;
        text.push('\n');
        fs::write(&side_path, text).map_err(|e| Error::io(side_path, e))
    }

    /// Reads an embedding CSV and aligns its rows with `graph` by label.
    ///
    /// Rows for labels absent from the graph are ignored; a graph node without
    /// a row is an error. The sidecar, when present, restores the parameters.
    pub fn read_csv(path: impl AsRef<Path>, graph: &Graph) -> Result<Self> {
        let path = path.as_ref();
        let mut reader = csv::Reader::from_path(path)?;
        let dim = reader.headers()?.len().saturating_sub(1);
        if dim == 0 {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line: 1,
                message: "embedding header has no coordinate columns".into(),
            });
        }
        let n = graph.node_count();
        let mut coords = vec![f64::NAN; n * dim];
        let mut seen = vec![false; n];
        for (row_no, record) in reader.records().enumerate() {
            let record = record?;
            let line = row_no + 2;
            let Some(i) = graph.id_of(&record[0]) else {
                continue;
            };
            if record.len() != dim + 1 {
                return Err(Error::Parse {
                    path: path.to_path_buf(),
                    line,
                    message: format!("expected {} fields, found {}", dim + 1, record.len()),
                });
            }
            for k in 0..dim {
                coords[i * dim + k] = record[k + 1].trim().parse().map_err(|e| Error::Parse {
                    path: path.to_path_buf(),
                    line,
                    message: format!("bad coordinate {:?}: {e}", &record[k + 1]),
                })?;
            }
            seen[i] = true;
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidInput(format!(
                "embedding {} has no row for node {:?}",
                path.display(),
                graph.label(missing)
            )));
        }

        let side_path = Self::sidecar_path(path);
        let sidecar: Option<EmbeddingSidecar> = match fs::read_to_string(&side_path) {
            Ok(text) => Some(serde_json::from_str(&text)?),
            Err(_) => None,
        };
        let params = sidecar
            .as_ref()
            .map(|s| s.params.clone())
            .unwrap_or_default();
        let mut emb = Embedding::from_coords(coords, dim, params)?;
        if let Some(s) = sidecar {
            emb.objective_value = s.objective_value;
            emb.restart_objectives = s.restart_objectives;
            emb.diverged_restarts = s.diverged_restarts;
            emb.seed = s.seed;
        }
        Ok(emb)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_roundtrip_is_exact() {
        let g = Graph::with_labels(vec!["a".into(), "b,c".into(), "d".into()], [(0, 1), (1, 2)])
            .unwrap();
        let coords = vec![
            0.1,
            -2.0 / 3.0,
            1e-300,
            std::f64::consts::PI,
            -0.0,
            12345.678901234567,
        ];
        let mut emb = Embedding::from_coords(coords, 2, CneParams::default()).unwrap();
        emb.objective_value = -3.25;
        emb.seed = 11;
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("emb.csv");
        emb.write_csv(&path, &g).unwrap();
        let back = Embedding::read_csv(&path, &g).unwrap();
        assert_eq!(back.coords(), emb.coords());
        assert_eq!(back.params().dim, 2);
        assert_eq!(back.seed, 11);
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("node,x0,x1\n"));
    }

    #[test]
    fn missing_row_is_an_error() {
        let g = Graph::from_edges(2, [(0, 1)]);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("emb.csv");
        std::fs::write(&path, "node,x0\n0,1.0\n").unwrap();
        assert!(Embedding::read_csv(&path, &g).is_err());
    }

    #[test]
    fn rejects_non_finite() {
        assert!(Embedding::from_coords(vec![f64::INFINITY], 1, CneParams::default()).is_err());
    }
}
