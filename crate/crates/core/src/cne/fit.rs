//! Maximum-likelihood fitting by full-batch gradient ascent with backtracking.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::model::CneModel;
use super::{fit_degree_prior, CneParams, DegreePrior, Embedding, NonEdgeMode};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::seed::derive_seed;

/// Relative step floor below which the line search gives up.
const MIN_STEP_FRACTION: f64 = 1e-14;
const STEP_GROWTH: f64 = 1.5;

/// Summary of one restart.
#[derive(Clone, Debug, PartialEq)]
pub struct RestartOutcome {
    pub restart: usize,
    /// `None` when the restart diverged.
    pub objective: Option<f64>,
    pub iterations: usize,
}

struct Ascent {
    coords: Vec<f64>,
    objective: f64,
    history: Vec<f64>,
    iterations: usize,
}

fn axpy(x: &[f64], step: f64, dir: &[f64]) -> Vec<f64> {
    x.iter().zip(dir).map(|(a, g)| a + step * g).collect()
}

fn converged(improvement: f64, objective: f64, tol: f64) -> bool {
    improvement <= tol * objective.abs().max(1.0)
}

fn ascend_exact(
    model: &CneModel<'_>,
    mut x: Vec<f64>,
    params: &CneParams,
) -> Result<Option<Ascent>> {
    let mut objective = model.log_likelihood(&x)?;
    if !objective.is_finite() {
        return Ok(None);
    }
    let mut history = vec![objective];
    let mut step = params.step_size;
    let min_step = params.step_size * MIN_STEP_FRACTION;
    let mut iterations = 0;
    while iterations < params.max_iter {
        iterations += 1;
        let grad = model.gradient(&x)?;
        if grad.iter().any(|g| !g.is_finite()) {
            return Ok(None);
        }
        let accepted = loop {
            let candidate = axpy(&x, step, &grad);
            let value = model.log_likelihood(&candidate)?;
            if value.is_finite() && value >= objective {
                break Some((candidate, value));
            }
            step *= 0.5;
            if step < min_step {
                break None;
            }
        };
        let Some((candidate, value)) = accepted else {
            break;
        };
        let improvement = value - objective;
        x = candidate;
        objective = value;
        history.push(value);
        if converged(improvement, objective, params.tol) {
            break;
        }
        step *= STEP_GROWTH;
    }
    Ok(Some(Ascent {
        coords: x,
        objective,
        history,
        iterations,
    }))
}

/// Uniformly drawn non-neighbors of every node, each carrying half the
/// reweighting factor `(n − 1 − deg) / per_node` (the pair is seen from one side only).
fn sample_non_edges(g: &Graph, per_node: usize, rng: &mut ChaCha8Rng) -> Vec<(usize, usize, f64)> {
    let n = g.node_count();
    let mut pairs = Vec::with_capacity(n * per_node);
    for i in 0..n {
        let available = n - 1 - g.degree(i);
        if available == 0 {
            continue;
        }
        let weight = 0.5 * available as f64 / per_node as f64;
        if available * 10 < n {
            let candidates: Vec<usize> = (0..n).filter(|&j| j != i && !g.has_edge(i, j)).collect();
            for _ in 0..per_node {
                pairs.push((i, candidates[rng.random_range(0..candidates.len())], weight));
            }
        } else {
            let mut drawn = 0;
            while drawn < per_node {
                let j = rng.random_range(0..n);
                if j != i && !g.has_edge(i, j) {
                    pairs.push((i, j, weight));
                    drawn += 1;
                }
            }
        }
    }
    pairs
}

/// Objective estimate on the given non-edge sample, and its exact gradient.
fn sampled_objective(model: &CneModel<'_>, x: &[f64], pairs: &[(usize, usize, f64)]) -> f64 {
    let edges: f64 = model
        .graph()
        .edges()
        .map(|(i, j)| model.pair_log_likelihood(x, i, j, true))
        .sum();
    let non_edges: f64 = pairs
        .iter()
        .map(|&(i, j, w)| w * model.pair_log_likelihood(x, i, j, false))
        .sum();
    edges + non_edges
}

fn sampled_gradient(
    model: &CneModel<'_>,
    x: &[f64],
    pairs: &[(usize, usize, f64)],
    gamma: f64,
) -> Vec<f64> {
    let dim = model.dim();
    let mut grad = vec![0.0; x.len()];
    let push = |i: usize, j: usize, weight: f64, grad: &mut [f64]| {
        for k in 0..dim {
            let delta = weight * (x[i * dim + k] - x[j * dim + k]);
            grad[i * dim + k] += delta;
            grad[j * dim + k] -= delta;
        }
    };
    for (i, j) in model.graph().edges() {
        let p = model.probability(x, i, j);
        push(i, j, gamma * (p - 1.0), &mut grad);
    }
    for &(i, j, w) in pairs {
        let p = model.probability(x, i, j);
        push(i, j, w * gamma * p, &mut grad);
    }
    grad
}

fn ascend_sampled(
    model: &CneModel<'_>,
    mut x: Vec<f64>,
    params: &CneParams,
    per_node: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Option<Ascent>> {
    let gamma = params.gamma();
    let mut step = params.step_size;
    let min_step = params.step_size * MIN_STEP_FRACTION;
    let mut history = Vec::new();
    let mut iterations = 0;
    while iterations < params.max_iter {
        iterations += 1;
        let pairs = sample_non_edges(model.graph(), per_node, rng);
        let current = sampled_objective(model, &x, &pairs);
        if !current.is_finite() {
            return Ok(None);
        }
        let grad = sampled_gradient(model, &x, &pairs, gamma);
        if grad.iter().any(|g| !g.is_finite()) {
            return Ok(None);
        }
        let accepted = loop {
            let candidate = axpy(&x, step, &grad);
            let value = sampled_objective(model, &candidate, &pairs);
            if value.is_finite() && value >= current {
                break Some((candidate, value));
            }
            step *= 0.5;
            if step < min_step {
                break None;
            }
        };
        let Some((candidate, value)) = accepted else {
            break;
        };
        x = candidate;
        history.push(value);
        if converged(value - current, value, params.tol) {
            break;
        }
        step *= STEP_GROWTH;
    }
    let objective = model.log_likelihood(&x)?;
    if !objective.is_finite() {
        return Ok(None);
    }
    Ok(Some(Ascent {
        coords: x,
        objective,
        history,
        iterations,
    }))
}

/// Fits the degree prior, then the embedding. See [`fit_embedding_with_prior`].
pub fn fit_embedding(g: &Graph, params: &CneParams, seed: u64) -> Result<Embedding> {
    params.validate()?;
    let prior = fit_degree_prior(g, params.prior_tol)?;
    fit_embedding_with_prior(g, &prior, params, seed)
}

/// Runs `params.restarts` independent ascents from seeded standard-normal
/// starts and keeps the one with the highest log-likelihood.
///
/// Restarts whose objective or gradient becomes non-finite are discarded and
/// counted. The result is a deterministic function of `(g, params, seed)`.
pub fn fit_embedding_with_prior(
    g: &Graph,
    prior: &DegreePrior,
    params: &CneParams,
    seed: u64,
) -> Result<Embedding> {
    params.validate()?;
    let model = CneModel::new(g, prior, params)?;
    let n = g.node_count();
    let mut best: Option<Ascent> = None;
    let mut outcomes = Vec::with_capacity(params.restarts);
    for restart in 0..params.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, restart as u64));
        let init: Vec<f64> = (0..n * params.dim)
            .map(|_| rng.sample(StandardNormal))
            .collect();
        let result = match params.nonedge {
            NonEdgeMode::Exact => ascend_exact(&model, init, params)?,
            NonEdgeMode::Sampled { per_node } => {
                ascend_sampled(&model, init, params, per_node, &mut rng)?
            }
        };
        outcomes.push(RestartOutcome {
            restart,
            objective: result.as_ref().map(|a| a.objective),
            iterations: result.as_ref().map_or(0, |a| a.iterations),
        });
        if let Some(ascent) = result {
            log::debug!(
                "restart {restart}: objective {:.6} after {} iterations",
                ascent.objective,
                ascent.iterations
            );
            if best.as_ref().is_none_or(|b| ascent.objective > b.objective) {
                best = Some(ascent);
            }
        }
    }
    let diverged = outcomes.iter().filter(|o| o.objective.is_none()).count();
    let Some(best) = best else {
        return Err(Error::Diverged {
            restarts: params.restarts,
        });
    };
    let mut emb = Embedding::from_coords(best.coords, params.dim, params.clone())?;
    emb.objective_value = best.objective;
    emb.restart_objectives = outcomes.iter().filter_map(|o| o.objective).collect();
    emb.diverged_restarts = diverged;
    emb.history = best.history;
    emb.seed = seed;
    Ok(emb)
}
