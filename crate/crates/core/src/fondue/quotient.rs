use crate::cne::Embedding;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// A ±1 assignment of a node's neighbors to the two sides of a binary split,
/// aligned with the sorted neighbor list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SplitVector {
    signs: Vec<i8>,
}

impl SplitVector {
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if let Some(bad) = signs.iter().find(|&&s| s != 1 && s != -1) {
            return Err(Error::InvalidInput(format!("split sign {bad} is not ±1")));
        }
        Ok(SplitVector { signs })
    }

    /// `+1` for positions in `positive`, `−1` elsewhere.
    pub fn from_positive(len: usize, positive: impl IntoIterator<Item = usize>) -> Self {
        let mut signs = vec![-1i8; len];
        for k in positive {
            signs[k] = 1;
        }
        SplitVector { signs }
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    /// True when every neighbor lands on the same side.
    pub fn is_one_sided(&self) -> bool {
        self.signs.windows(2).all(|w| w[0] == w[1])
    }

    pub fn negated(&self) -> Self {
        SplitVector {
            signs: self.signs.iter().map(|s| -s).collect(),
        }
    }

    /// Representative of the sign class `{b, −b}` whose first entry is `+1`.
    pub fn canonical(&self) -> Self {
        match self.signs.first() {
            Some(&-1) => self.negated(),
            _ => self.clone(),
        }
    }
}

/// `M_i`, the Gram matrix of the neighbor differences `x_i − x_j` of one node.
///
/// The constant `γ²` of the CNE gradient is left out; it scales every entry
/// by the same positive factor and cannot change which split is best.
#[derive(Clone, Debug, PartialEq)]
pub struct QuotientMatrix {
    node: usize,
    neighbors: Vec<usize>,
    data: Vec<f64>,
}

impl QuotientMatrix {
    /// Wraps a dense row-major `k×k` matrix. `neighbors` names the rows; use
    /// `0..k` when the matrix is not tied to a graph.
    pub fn from_dense(node: usize, neighbors: Vec<usize>, data: Vec<f64>) -> Result<Self> {
        let k = neighbors.len();
        if data.len() != k * k {
            return Err(Error::DimensionMismatch {
                expected: k * k,
                actual: data.len(),
            });
        }
        Ok(QuotientMatrix {
            node,
            neighbors,
            data,
        })
    }

    /// Gram matrix `DᵀD` of the given difference columns (each of equal length).
    pub fn from_columns(node: usize, neighbors: Vec<usize>, columns: &[Vec<f64>]) -> Result<Self> {
        let k = columns.len();
        if neighbors.len() != k {
            return Err(Error::DimensionMismatch {
                expected: k,
                actual: neighbors.len(),
            });
        }
        let mut data = vec![0.0; k * k];
        for a in 0..k {
            for b in a..k {
                let v: f64 = columns[a].iter().zip(&columns[b]).map(|(x, y)| x * y).sum();
                data[a * k + b] = v;
                data[b * k + a] = v;
            }
        }
        Ok(QuotientMatrix {
            node,
            neighbors,
            data,
        })
    }

    pub fn node(&self) -> usize {
        self.node
    }

    pub fn neighbors(&self) -> &[usize] {
        &self.neighbors
    }

    pub fn size(&self) -> usize {
        self.neighbors.len()
    }

    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.data[a * self.size() + b]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub(crate) fn matvec(&self, v: &[f64], out: &mut [f64]) {
        let k = self.size();
        for (a, o) in out.iter_mut().enumerate() {
            *o = self.data[a * k..(a + 1) * k]
                .iter()
                .zip(v)
                .map(|(m, x)| m * x)
                .sum();
        }
    }

    /// Splits the neighbor list by sign: `(+1 side, −1 side)`.
    pub fn groups(&self, b: &SplitVector) -> (Vec<usize>, Vec<usize>) {
        let mut plus = Vec::new();
        let mut minus = Vec::new();
        for (&j, &s) in self.neighbors.iter().zip(b.signs()) {
            if s > 0 {
                plus.push(j);
            } else {
                minus.push(j);
            }
        }
        (plus, minus)
    }
}

/// Builds `M_i[k, l] = (x_i − x_k)ᵀ(x_i − x_l)` over the sorted neighbors of `i`.
pub fn build_quotient_matrix(g: &Graph, emb: &Embedding, i: usize) -> Result<QuotientMatrix> {
    if emb.node_count() != g.node_count() {
        return Err(Error::DimensionMismatch {
            expected: g.node_count(),
            actual: emb.node_count(),
        });
    }
    let neighbors = g.neighbors(i).to_vec();
    if neighbors.is_empty() {
        return Err(Error::Degenerate { node: i, degree: 0 });
    }
    let xi = emb.point(i);
    let columns: Vec<Vec<f64>> = neighbors
        .iter()
        .map(|&j| xi.iter().zip(emb.point(j)).map(|(a, b)| a - b).collect())
        .collect();
    QuotientMatrix::from_columns(i, neighbors, &columns)
}

/// `bᵀMb / bᵀb`.
///
/// The value depends only on the sign class of `b`: the sum is evaluated on
/// the canonical representative so `b` and `−b` give bit-identical results.
pub fn rayleigh_quotient(m: &QuotientMatrix, b: &SplitVector) -> Result<f64> {
    let k = m.size();
    if b.len() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            actual: b.len(),
        });
    }
    if k == 0 {
        return Err(Error::InvalidInput("empty split vector".into()));
    }
    let canon = b.canonical();
    let s = canon.signs();
    let mut total = 0.0;
    for a in 0..k {
        let row = &m.data[a * k..(a + 1) * k];
        let mut acc = 0.0;
        for (l, &v) in row.iter().enumerate() {
            acc += v * f64::from(s[l]);
        }
        total += f64::from(s[a]) * acc;
    }
    Ok(total / k as f64)
}
