//! Searches for the binary split maximizing the Rayleigh quotient of `M_i`.
//!
//! All searches range over the same sign classes `{b, −b}`. Unless
//! `include_one_sided` is set, the class where every neighbor lands on one
//! side is excluded, so exhaustive and heuristic results are comparable.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::quotient::{rayleigh_quotient, QuotientMatrix, SplitVector};
use crate::error::{Error, Result};

/// Largest neighborhood accepted by [`exhaustive`].
pub const MAX_EXHAUSTIVE: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitMethod {
    Random,
    Eigenvector,
    Exhaustive,
}

impl SplitMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            SplitMethod::Random => "random",
            SplitMethod::Eigenvector => "eigenvector",
            SplitMethod::Exhaustive => "exhaustive",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HeuristicConfig {
    pub random_trials: usize,
    /// Neighborhoods up to this size are searched exhaustively.
    pub exhaustive_cutoff: usize,
    pub include_one_sided: bool,
    pub power_tol: f64,
    pub power_max_iter: usize,
    pub seed: u64,
}

impl Default for HeuristicConfig {
    fn default() -> Self {
        HeuristicConfig {
            random_trials: 100,
            exhaustive_cutoff: 12,
            include_one_sided: false,
            power_tol: 1e-8,
            power_max_iter: 1000,
            seed: 0,
        }
    }
}

/// Best split found for one node's neighborhood.
#[derive(Clone, Debug, PartialEq)]
pub struct SplitResult {
    pub node: usize,
    pub split: SplitVector,
    pub value: f64,
    pub method: SplitMethod,
    /// Neighbors on the `+1` and `−1` sides.
    pub groups: (Vec<usize>, Vec<usize>),
}

impl SplitResult {
    fn new(m: &QuotientMatrix, split: SplitVector, method: SplitMethod) -> Result<Self> {
        let value = rayleigh_quotient(m, &split)?;
        let groups = m.groups(&split);
        Ok(SplitResult {
            node: m.node(),
            split,
            value,
            method,
            groups,
        })
    }
}

fn require_splittable(m: &QuotientMatrix, include_one_sided: bool) -> Result<()> {
    let k = m.size();
    if k == 0 || (k < 2 && !include_one_sided) {
        return Err(Error::Degenerate {
            node: m.node(),
            degree: k,
        });
    }
    Ok(())
}

/// Best of `trials` uniform sign vectors; one-sided draws are redrawn when `k ≥ 2`.
pub fn random_split_heuristic(m: &QuotientMatrix, trials: usize, seed: u64) -> Result<SplitResult> {
    require_splittable(m, true)?;
    if trials == 0 {
        return Err(Error::InvalidInput(
            "random split needs at least one trial".into(),
        ));
    }
    let k = m.size();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(SplitVector, f64)> = None;
    for _ in 0..trials {
        let b = loop {
            let signs: Vec<i8> = (0..k)
                .map(|_| if rng.random::<bool>() { 1 } else { -1 })
                .collect();
            let b = SplitVector::new(signs)?;
            if k < 2 || !b.is_one_sided() {
                break b;
            }
        };
        let value = rayleigh_quotient(m, &b)?;
        if best.as_ref().is_none_or(|(_, v)| value > *v) {
            best = Some((b, value));
        }
    }
    let (b, _) = best.expect("at least one trial");
    SplitResult::new(m, b, SplitMethod::Random)
}

/// Outcome of power iteration on a PSD matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerIteration {
    pub vector: Vec<f64>,
    pub eigenvalue: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Power iteration from a seeded Gaussian start. Convergence is declared when
/// successive unit iterates differ by less than `tol` up to sign.
pub fn power_iteration(m: &QuotientMatrix, tol: f64, max_iter: usize, seed: u64) -> PowerIteration {
    let k = m.size();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<f64> = (0..k).map(|_| rng.sample(StandardNormal)).collect();
    normalize(&mut v);
    let mut w = vec![0.0; k];
    for iter in 1..=max_iter {
        m.matvec(&v, &mut w);
        let norm = norm(&w);
        if norm <= f64::MIN_POSITIVE {
            return PowerIteration {
                vector: v,
                eigenvalue: 0.0,
                iterations: iter,
                converged: true,
            };
        }
        w.iter_mut().for_each(|x| *x /= norm);
        let same: f64 = w
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>()
            .sqrt();
        let flip: f64 = w
            .iter()
            .zip(&v)
            .map(|(a, b)| (a + b).powi(2))
            .sum::<f64>()
            .sqrt();
        std::mem::swap(&mut v, &mut w);
        if same.min(flip) < tol {
            return PowerIteration {
                vector: v,
                eigenvalue: norm,
                iterations: iter,
                converged: true,
            };
        }
    }
    m.matvec(&v, &mut w);
    let eigenvalue = v.iter().zip(&w).map(|(a, b)| a * b).sum();
    PowerIteration {
        vector: v,
        eigenvalue,
        iterations: max_iter,
        converged: false,
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn normalize(v: &mut [f64]) {
    let n = norm(v);
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    } else if let Some(first) = v.first_mut() {
        *first = 1.0;
    }
}

/// Scans the `k` threshold splits of `vector`: the top `t` entries get `+1`.
fn threshold_scan(
    m: &QuotientMatrix,
    vector: &[f64],
    include_one_sided: bool,
) -> Result<SplitVector> {
    let k = m.size();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| vector[b].total_cmp(&vector[a]).then(a.cmp(&b)));
    let last = if include_one_sided { k } else { k - 1 };

    // Incremental bᵀMb: flipping entry j changes it by −4·b_j·(Mb)_j + 4·M_jj.
    let mut signs = vec![-1.0f64; k];
    let mut mb = vec![0.0; k];
    m.matvec(&signs, &mut mb);
    let mut quad: f64 = signs.iter().zip(&mb).map(|(s, x)| s * x).sum();
    let mut best: Option<(usize, f64)> = None;
    for (t, &j) in order.iter().enumerate().take(last) {
        let bj = signs[j];
        quad += -4.0 * bj * mb[j] + 4.0 * m.get(j, j);
        for (a, x) in mb.iter_mut().enumerate() {
            *x -= 2.0 * bj * m.get(a, j);
        }
        signs[j] = -bj;
        if best.is_none_or(|(_, q)| quad > q) {
            best = Some((t + 1, quad));
        }
    }
    let (top, _) = best.ok_or(Error::Degenerate {
        node: m.node(),
        degree: k,
    })?;
    Ok(SplitVector::from_positive(k, order[..top].iter().copied()))
}

/// Thresholds the dominant eigenvector of `M` at every cut point.
///
/// Fails with [`Error::NonConvergence`] if power iteration does not converge.
pub fn eigenvector_threshold_heuristic(
    m: &QuotientMatrix,
    config: &HeuristicConfig,
) -> Result<SplitResult> {
    require_splittable(m, config.include_one_sided)?;
    let power = power_iteration(m, config.power_tol, config.power_max_iter, config.seed);
    if !power.converged {
        return Err(Error::NonConvergence {
            what: "power iteration",
            iterations: power.iterations,
            residual: config.power_tol,
        });
    }
    let b = threshold_scan(m, &power.vector, config.include_one_sided)?;
    SplitResult::new(m, b, SplitMethod::Eigenvector)
}

/// Enumerates every sign class (first entry fixed to `+1`) and evaluates each exactly.
pub fn exhaustive(m: &QuotientMatrix, include_one_sided: bool) -> Result<SplitResult> {
    require_splittable(m, include_one_sided)?;
    let k = m.size();
    if k > MAX_EXHAUSTIVE {
        return Err(Error::InvalidInput(format!(
            "exhaustive search over {k} neighbors exceeds the limit of {MAX_EXHAUSTIVE}"
        )));
    }
    let start = if include_one_sided { 0u64 } else { 1 };
    let mut best: Option<(SplitVector, f64)> = None;
    for mask in start..1u64 << (k - 1) {
        let b =
            SplitVector::from_positive(k, (0..k).filter(|&a| a == 0 || mask >> (a - 1) & 1 == 0));
        let value = rayleigh_quotient(m, &b)?;
        if best.as_ref().is_none_or(|(_, v)| value > *v) {
            best = Some((b, value));
        }
    }
    let (b, _) = best.expect("non-empty enumeration");
    SplitResult::new(m, b, SplitMethod::Exhaustive)
}

/// Better of the eigenvector and random heuristics; ties go to the eigenvector.
///
/// A non-converged power iteration still contributes its last iterate.
pub fn combined_heuristic(m: &QuotientMatrix, config: &HeuristicConfig) -> Result<SplitResult> {
    require_splittable(m, config.include_one_sided)?;
    let power = power_iteration(m, config.power_tol, config.power_max_iter, config.seed);
    if !power.converged {
        log::warn!(
            "power iteration for node {} did not converge in {} iterations",
            m.node(),
            power.iterations
        );
    }
    let eig = SplitResult::new(
        m,
        threshold_scan(m, &power.vector, config.include_one_sided)?,
        SplitMethod::Eigenvector,
    )?;
    let rnd = random_split_heuristic(m, config.random_trials, config.seed)?;
    Ok(if rnd.value > eig.value { rnd } else { eig })
}
