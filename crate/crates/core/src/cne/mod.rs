//! Conditional Network Embedding (CNE).
//!
//! Links are modelled as a mixture of two half-normal distance distributions,
//! weighted by a maximum-entropy prior fitted to the observed degrees. The
//! embedding is the (local) maximum-likelihood point found by gradient ascent.

mod embedding;
mod fit;
mod model;
mod prior;

pub use embedding::Embedding;
pub use fit::{fit_embedding, fit_embedding_with_prior, RestartOutcome};
pub use model::{
    gradient_node, half_normal_pdf, link_probability, log_likelihood, CneModel, PROBABILITY_EPS,
};
pub use prior::{fit_degree_prior, DegreePrior, PRIOR_EPS};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How the sum over unlinked pairs is evaluated during optimization.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum NonEdgeMode {
    /// Every unlinked pair, O(n²) per iteration.
    #[default]
    Exact,
    /// Per node, `per_node` uniformly drawn non-neighbors reweighted to the full count.
    Sampled { per_node: usize },
}

/// Model and optimizer settings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CneParams {
    pub dim: usize,
    /// Spread of the half-normal for linked pairs.
    pub sigma1: f64,
    /// Spread of the half-normal for unlinked pairs; must exceed `sigma1`.
    pub sigma2: f64,
    pub max_iter: usize,
    /// Initial step of the line search.
    pub step_size: f64,
    /// A restart stops once an accepted step improves the objective by less
    /// than `tol · max(1, |objective|)`.
    pub tol: f64,
    pub restarts: usize,
    /// Tolerance on the largest expected-minus-observed degree of the prior.
    pub prior_tol: f64,
    pub nonedge: NonEdgeMode,
}

impl Default for CneParams {
    fn default() -> Self {
        CneParams {
            dim: 8,
            sigma1: 1.0,
            sigma2: 2.0,
            max_iter: 1000,
            step_size: 0.05,
            tol: 1e-7,
            restarts: 1,
            prior_tol: 1e-6,
            nonedge: NonEdgeMode::Exact,
        }
    }
}

impl CneParams {
    /// `1/σ₁² − 1/σ₂²`.
    pub fn gamma(&self) -> f64 {
        1.0 / (self.sigma1 * self.sigma1) - 1.0 / (self.sigma2 * self.sigma2)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::InvalidInput(
                "embedding dimension must be at least 1".into(),
            ));
        }
        if !(self.sigma1 > 0.0 && self.sigma2 >= self.sigma1) || !self.sigma2.is_finite() {
            return Err(Error::InvalidInput(format!(
                "need 0 < sigma1 <= sigma2, got sigma1={} sigma2={}",
                self.sigma1, self.sigma2
            )));
        }
        if self.restarts == 0 {
            return Err(Error::InvalidInput("restarts must be at least 1".into()));
        }
        if !(self.step_size > 0.0 && self.tol >= 0.0 && self.prior_tol > 0.0) {
            return Err(Error::InvalidInput(
                "step_size, tol and prior_tol must be positive".into(),
            ));
        }
        if let NonEdgeMode::Sampled { per_node: 0 } = self.nonedge {
            return Err(Error::InvalidInput(
                "sampled non-edge mode needs per_node >= 1".into(),
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_gamma() {
        let p = CneParams::default();
        assert_eq!((p.dim, p.sigma1, p.sigma2), (8, 1.0, 2.0));
        assert!((p.gamma() - 0.75).abs() < 1e-15);
        p.validate().unwrap();
    }

    #[test]
    fn rejects_inverted_spreads() {
        let p = CneParams {
            sigma1: 2.0,
            sigma2: 1.0,
            ..CneParams::default()
        };
        assert!(p.validate().is_err());
    }

    #[test]
    fn params_json_fills_defaults() {
        let p: CneParams =
            serde_json::from_str(r#"{"dim": 4, "nonedge": {"mode": "sampled", "per_node": 20}}"#)
                .unwrap();
        assert_eq!(p.dim, 4);
        assert_eq!(p.sigma2, 2.0);
        assert_eq!(p.nonedge, NonEdgeMode::Sampled { per_node: 20 });
    }
}
