use rayon::prelude::*;

use super::{CneParams, DegreePrior, Embedding};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Clamp applied to posterior link probabilities before taking logarithms.
pub const PROBABILITY_EPS: f64 = 1e-12;

/// Density of the half-normal distribution with spread `sigma` at `dist ≥ 0`.
pub fn half_normal_pdf(dist: f64, sigma: f64) -> Result<f64> {
    if dist.is_nan() || dist < 0.0 {
        return Err(Error::InvalidInput(format!(
            "half-normal density at negative distance {dist}"
        )));
    }
    if !(sigma > 0.0) {
        return Err(Error::InvalidInput(format!(
            "half-normal spread must be positive, got {sigma}"
        )));
    }
    let norm = std::f64::consts::SQRT_2 / (sigma * std::f64::consts::PI.sqrt());
    Ok(norm * (-dist * dist / (2.0 * sigma * sigma)).exp())
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

fn log_sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        -(-z).exp().ln_1p()
    } else {
        z - z.exp().ln_1p()
    }
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Posterior probability that two points are linked given the prior link probability.
///
/// Evaluated in log-odds form, `logit P + ln(σ₂/σ₁) − γ‖xi − xj‖²/2`, which is
/// algebraically the ratio of prior-weighted half-normal densities.
pub fn link_probability(xi: &[f64], xj: &[f64], prior: f64, params: &CneParams) -> Result<f64> {
    if xi.len() != xj.len() {
        return Err(Error::DimensionMismatch {
            expected: xi.len(),
            actual: xj.len(),
        });
    }
    if xi.iter().chain(xj).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("link probability coordinates"));
    }
    if !(prior > 0.0 && prior < 1.0) {
        return Err(Error::InvalidInput(format!(
            "prior probability {prior} outside (0, 1)"
        )));
    }
    let logit = (prior / (1.0 - prior)).ln();
    let z = logit + (params.sigma2 / params.sigma1).ln()
        - 0.5 * params.gamma() * squared_distance(xi, xj);
    Ok(sigmoid(z))
}

/// The CNE likelihood of one graph under a fitted prior, evaluated on raw
/// row-major coordinates of width `dim`.
pub struct CneModel<'a> {
    graph: &'a Graph,
    prior: &'a DegreePrior,
    dim: usize,
    gamma: f64,
    log_ratio: f64,
}

impl<'a> CneModel<'a> {
    pub fn new(graph: &'a Graph, prior: &'a DegreePrior, params: &CneParams) -> Result<Self> {
        if prior.node_count() != graph.node_count() {
            return Err(Error::DimensionMismatch {
                expected: graph.node_count(),
                actual: prior.node_count(),
            });
        }
        Ok(CneModel {
            graph,
            prior,
            dim: params.dim,
            gamma: params.gamma(),
            log_ratio: (params.sigma2 / params.sigma1).ln(),
        })
    }

    pub fn graph(&self) -> &Graph {
        self.graph
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn point<'c>(&self, coords: &'c [f64], i: usize) -> &'c [f64] {
        &coords[i * self.dim..(i + 1) * self.dim]
    }

    fn check(&self, coords: &[f64]) -> Result<()> {
        let expected = self.graph.node_count() * self.dim;
        if coords.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                actual: coords.len(),
            });
        }
        Ok(())
    }

    /// Posterior log-odds of a link between `i` and `j`.
    pub(crate) fn log_odds(&self, coords: &[f64], i: usize, j: usize) -> f64 {
        let d2 = squared_distance(self.point(coords, i), self.point(coords, j));
        self.prior.logit(i, j) + self.log_ratio - 0.5 * self.gamma * d2
    }

    pub fn probability(&self, coords: &[f64], i: usize, j: usize) -> f64 {
        sigmoid(self.log_odds(coords, i, j))
    }

    /// Clamped log-probability of the observed state of pair `(i, j)`.
    pub(crate) fn pair_log_likelihood(
        &self,
        coords: &[f64],
        i: usize,
        j: usize,
        linked: bool,
    ) -> f64 {
        let z = self.log_odds(coords, i, j);
        let lo = PROBABILITY_EPS.ln();
        let hi = (-PROBABILITY_EPS).ln_1p();
        let value = if linked {
            log_sigmoid(z)
        } else {
            log_sigmoid(-z)
        };
        value.clamp(lo, hi)
    }

    /// Terms of node `i` against every `j > i`; summing these over `i` gives the objective.
    fn row_log_likelihood(&self, coords: &[f64], i: usize) -> f64 {
        let n = self.graph.node_count();
        let nbrs = self.graph.neighbors(i);
        let mut k = nbrs.partition_point(|&j| j <= i);
        let mut total = 0.0;
        for j in i + 1..n {
            let linked = k < nbrs.len() && nbrs[k] == j;
            if linked {
                k += 1;
            }
            total += self.pair_log_likelihood(coords, i, j, linked);
        }
        total
    }

    /// Log-likelihood over unordered node pairs, excluding the diagonal.
    ///
    /// Row sums are computed in parallel and reduced in node order, so the
    /// value does not depend on the thread count.
    pub fn log_likelihood(&self, coords: &[f64]) -> Result<f64> {
        self.check(coords)?;
        let rows: Vec<f64> = (0..self.graph.node_count())
            .into_par_iter()
            .map(|i| self.row_log_likelihood(coords, i))
            .collect();
        Ok(rows.iter().sum())
    }

    /// `γ Σ_{j≠i} (x_i − x_j)(P_ij − A_ij)`, written into `out`.
    pub(crate) fn gradient_into(&self, coords: &[f64], i: usize, out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
        let xi = self.point(coords, i);
        let nbrs = self.graph.neighbors(i);
        let mut k = 0;
        for j in 0..self.graph.node_count() {
            if j == i {
                continue;
            }
            let linked = k < nbrs.len() && nbrs[k] == j;
            if linked {
                k += 1;
            }
            let p = sigmoid(self.log_odds(coords, i, j));
            let weight = self.gamma * (p - if linked { 1.0 } else { 0.0 });
            for (o, (a, b)) in out.iter_mut().zip(xi.iter().zip(self.point(coords, j))) {
                *o += weight * (a - b);
            }
        }
    }

    pub fn gradient_node(&self, coords: &[f64], i: usize) -> Result<Vec<f64>> {
        self.check(coords)?;
        let mut out = vec![0.0; self.dim];
        self.gradient_into(coords, i, &mut out);
        Ok(out)
    }

    /// Full gradient, row-major like `coords`.
    pub fn gradient(&self, coords: &[f64]) -> Result<Vec<f64>> {
        self.check(coords)?;
        let mut grad = vec![0.0; coords.len()];
        grad.par_chunks_mut(self.dim)
            .enumerate()
            .for_each(|(i, row)| self.gradient_into(coords, i, row));
        Ok(grad)
    }
}

/// Log-likelihood of `emb` on `g` under `prior`.
pub fn log_likelihood(g: &Graph, emb: &Embedding, prior: &DegreePrior) -> Result<f64> {
    CneModel::new(g, prior, emb.params())?.log_likelihood(emb.coords())
}

/// Gradient of the log-likelihood with respect to the position of node `i`.
pub fn gradient_node(
    g: &Graph,
    emb: &Embedding,
    prior: &DegreePrior,
    i: usize,
) -> Result<Vec<f64>> {
    if i >= g.node_count() {
        return Err(Error::InvalidInput(format!("node {i} out of range")));
    }
    CneModel::new(g, prior, emb.params())?.gradient_node(emb.coords(), i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cne::fit_degree_prior;

    fn params() -> CneParams {
        CneParams::default()
    }

    #[test]
    fn half_normal_at_zero() {
        assert!((half_normal_pdf(0.0, 1.0).unwrap() - 0.7978845608).abs() < 1e-10);
        assert!((half_normal_pdf(0.0, 2.0).unwrap() - 0.3989422804).abs() < 1e-10);
        assert!(half_normal_pdf(60.0, 1.0).unwrap() < 1e-300);
        assert!(half_normal_pdf(-0.1, 1.0).is_err());
    }

    #[test]
    fn link_probability_matches_density_ratio() {
        let p = params();
        let (a, b) = ([0.3, -1.0], [1.1, 0.4]);
        let dist = squared_distance(&a, &b).sqrt();
        for prior in [0.01, 0.5, 0.9] {
            let n1 = prior * half_normal_pdf(dist, p.sigma1).unwrap();
            let n2 = (1.0 - prior) * half_normal_pdf(dist, p.sigma2).unwrap();
            let expected = n1 / (n1 + n2);
            assert!((link_probability(&a, &b, prior, &p).unwrap() - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn coincident_points_with_even_prior() {
        let v = link_probability(&[0.0, 0.0], &[0.0, 0.0], 0.5, &params()).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn link_probability_limits() {
        let p = params();
        let near_one = link_probability(&[0.0], &[3.0], 1.0 - 1e-15, &p).unwrap();
        assert!(near_one > 1.0 - 1e-12);
        let far = link_probability(&[0.0], &[40.0], 0.5, &p).unwrap();
        assert!(far < 1e-100);
        assert!(link_probability(&[f64::NAN], &[0.0], 0.5, &p).is_err());
    }

    #[test]
    fn three_node_path_by_hand() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]);
        let prior = fit_degree_prior(&g, 1e-6).unwrap();
        let coords = vec![0.0, 0.0, 1.0, 0.5, 2.5, -0.5];
        let emb = Embedding::from_coords(coords.clone(), 2, params()).unwrap();
        let mut expected = 0.0;
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let pij = link_probability(
                &coords[2 * i..2 * i + 2],
                &coords[2 * j..2 * j + 2],
                prior.probability(i, j),
                &params(),
            )
            .unwrap();
            expected += if g.has_edge(i, j) {
                pij.ln()
            } else {
                (1.0 - pij).ln()
            };
        }
        let got = log_likelihood(&g, &emb, &prior).unwrap();
        assert!((got - expected).abs() < 1e-12, "{got} vs {expected}");
        assert!(got < 0.0);
    }

    #[test]
    fn equal_spreads_give_zero_gradient() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]);
        let prior = fit_degree_prior(&g, 1e-6).unwrap();
        let p = CneParams {
            sigma2: 1.0,
            ..params()
        };
        let emb = Embedding::from_coords(vec![0.0, 1.0, 2.0, -1.0, 0.5, 0.5], 2, p).unwrap();
        for i in 0..3 {
            assert!(gradient_node(&g, &emb, &prior, i)
                .unwrap()
                .iter()
                .all(|&v| v == 0.0));
        }
    }

    #[test]
    fn single_edge_gradients_are_opposite() {
        let g = Graph::from_edges(2, [(0, 1)]);
        let prior = fit_degree_prior(&g, 1e-6).unwrap();
        let emb = Embedding::from_coords(vec![-0.7, 0.2, 0.7, -0.2], 2, params()).unwrap();
        let a = gradient_node(&g, &emb, &prior, 0).unwrap();
        let b = gradient_node(&g, &emb, &prior, 1).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x + y).abs() < 1e-15);
        }
    }

    #[test]
    fn shape_mismatch_is_reported() {
        let g = Graph::from_edges(3, [(0, 1)]);
        let prior = fit_degree_prior(&g, 1e-8).unwrap();
        let model = CneModel::new(&g, &prior, &params()).unwrap();
        assert!(model.log_likelihood(&[0.0; 5]).is_err());
    }
}
