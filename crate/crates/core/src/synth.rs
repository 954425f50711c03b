//! Stochastic block model graphs, optionally degree-corrected.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Blocks of the given sizes; pairs inside a block link with `p_in`, across blocks with `p_out`.
///
/// With `degree_spread = s > 0` every node draws a weight `θ = exp(s·z)`,
/// `z ~ N(0, 1)`, normalized to mean 1 within its block, and the pair
/// probability becomes `min(1, θ_i·θ_j·p)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub block_sizes: Vec<usize>,
    pub p_in: f64,
    pub p_out: f64,
    #[serde(default)]
    pub degree_spread: f64,
}

impl SynthSpec {
    pub fn planted(blocks: usize, size: usize, p_in: f64, p_out: f64) -> Self {
        SynthSpec {
            block_sizes: vec![size; blocks],
            p_in,
            p_out,
            degree_spread: 0.0,
        }
    }

    pub fn node_count(&self) -> usize {
        self.block_sizes.iter().sum()
    }

    /// Block index of every node; blocks occupy consecutive id ranges.
    pub fn blocks(&self) -> Vec<usize> {
        self.block_sizes
            .iter()
            .enumerate()
            .flat_map(|(b, &size)| std::iter::repeat_n(b, size))
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        for (name, p) in [("p_in", self.p_in), ("p_out", self.p_out)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidInput(format!(
                    "{name} = {p} is not a probability"
                )));
            }
        }
        if !(self.degree_spread >= 0.0 && self.degree_spread.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "degree_spread = {} must be ≥ 0",
                self.degree_spread
            )));
        }
        if self.block_sizes.contains(&0) {
            return Err(Error::InvalidInput("block sizes must be positive".into()));
        }
        Ok(())
    }
}

fn degree_weights(spec: &SynthSpec, blocks: &[usize], rng: &mut ChaCha8Rng) -> Vec<f64> {
    if spec.degree_spread == 0.0 {
        return vec![1.0; blocks.len()];
    }
    let mut theta: Vec<f64> = blocks
        .iter()
        .map(|_| (spec.degree_spread * rng.sample::<f64, _>(StandardNormal)).exp())
        .collect();
    let mut start = 0;
    for &size in &spec.block_sizes {
        let block = &mut theta[start..start + size];
        let mean = block.iter().sum::<f64>() / size as f64;
        block.iter_mut().for_each(|t| *t /= mean);
        start += size;
    }
    theta
}

/// Samples every pair independently, in lexicographic pair order.
pub fn generate_synthetic(spec: &SynthSpec, seed: u64) -> Result<Graph> {
    spec.validate()?;
    let blocks = spec.blocks();
    let n = blocks.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let theta = degree_weights(spec, &blocks, &mut rng);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let base = if blocks[i] == blocks[j] {
                spec.p_in
            } else {
                spec.p_out
            };
            let p = (theta[i] * theta[j] * base).min(1.0);
            if rng.random::<f64>() < p {
                edges.push((i, j));
            }
        }
    }
    Ok(Graph::from_edges(n, edges))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn certain_blocks_are_disjoint_cliques() {
        let g = generate_synthetic(&SynthSpec::planted(2, 5, 1.0, 0.0), 1).unwrap();
        assert_eq!(g.edge_count(), 20);
        assert!(g.has_edge(0, 4) && g.has_edge(5, 9) && !g.has_edge(4, 5));
    }

    #[test]
    fn edge_count_within_three_sigma() {
        let (n, p) = (40usize, 0.1);
        let spec = SynthSpec::planted(2, n / 2, p, p);
        let pairs = (n * (n - 1) / 2) as f64;
        let (mean, sd) = (pairs * p, (pairs * p * (1.0 - p)).sqrt());
        let total: usize = (0..20)
            .map(|s| generate_synthetic(&spec, s).unwrap().edge_count())
            .sum();
        // The mean of 20 draws has standard deviation sd/√20.
        assert!((total as f64 / 20.0 - mean).abs() < 3.0 * sd / 20f64.sqrt());
        for s in 0..20 {
            let m = generate_synthetic(&spec, s).unwrap().edge_count() as f64;
            assert!((m - mean).abs() < 4.0 * sd);
        }
    }

    #[test]
    fn same_seed_same_graph() {
        let spec = SynthSpec::planted(3, 10, 0.5, 0.05);
        assert_eq!(
            generate_synthetic(&spec, 4).unwrap(),
            generate_synthetic(&spec, 4).unwrap()
        );
        assert_ne!(
            generate_synthetic(&spec, 4).unwrap(),
            generate_synthetic(&spec, 5).unwrap()
        );
    }

    #[test]
    fn degree_correction_widens_the_degree_range() {
        let plain = SynthSpec::planted(1, 200, 0.05, 0.0);
        let spread = SynthSpec {
            degree_spread: 0.8,
            ..plain.clone()
        };
        let range = |g: &Graph| {
            let d: Vec<usize> = (0..g.node_count()).map(|i| g.degree(i)).collect();
            d.iter().max().unwrap() - d.iter().min().unwrap()
        };
        let a = generate_synthetic(&plain, 1).unwrap();
        let b = generate_synthetic(&spread, 1).unwrap();
        assert!(range(&b) > 2 * range(&a));
        // Weights average to one, so the expected edge count is nearly unchanged.
        assert!((b.edge_count() as f64 / a.edge_count() as f64 - 1.0).abs() < 0.35);
    }

    #[test]
    fn invalid_probability_is_rejected() {
        assert!(generate_synthetic(&SynthSpec::planted(2, 3, 1.5, 0.0), 0).is_err());
        assert!(generate_synthetic(&SynthSpec::planted(2, 3, 0.5, -0.1), 0).is_err());
    }
}
