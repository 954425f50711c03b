//! Maximum-entropy link prior constrained by node degrees.
//!
//! The prior takes the form `P(i~j) = σ(λ_i + λ_j)`. Nodes of equal degree
//! share the same λ at the solution, so the fit runs over distinct degrees
//! rather than nodes, which keeps it cheap on large graphs.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Clamp applied to prior probabilities.
pub const PRIOR_EPS: f64 = 1e-9;

const MAX_NEWTON_STEPS: usize = 500;
const MAX_HALVINGS: usize = 60;
/// λ is confined to this range unless the degree forces exactly 0 or 1.
const LAMBDA_BOUND: f64 = 50.0;
const MAX_NEWTON_MOVE: f64 = 2.0;

#[derive(Clone, Debug, PartialEq)]
pub struct DegreePrior {
    lambda: Vec<f64>,
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// Logistic of `a + b`, treating `±∞` as saturation; an isolated endpoint wins.
fn pair_sigmoid(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY || b == f64::NEG_INFINITY {
        0.0
    } else if a == f64::INFINITY || b == f64::INFINITY {
        1.0
    } else {
        sigmoid(a + b)
    }
}

impl DegreePrior {
    pub fn from_lambda(lambda: Vec<f64>) -> Self {
        DegreePrior { lambda }
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    pub fn node_count(&self) -> usize {
        self.lambda.len()
    }

    /// Prior link probability of `i ≠ j`, clamped to `[ε, 1 − ε]`.
    pub fn probability(&self, i: usize, j: usize) -> f64 {
        pair_sigmoid(self.lambda[i], self.lambda[j]).clamp(PRIOR_EPS, 1.0 - PRIOR_EPS)
    }

    /// Log-odds of [`probability`](Self::probability).
    pub fn logit(&self, i: usize, j: usize) -> f64 {
        let bound = ((1.0 - PRIOR_EPS) / PRIOR_EPS).ln();
        let (a, b) = (self.lambda[i], self.lambda[j]);
        if a == f64::NEG_INFINITY || b == f64::NEG_INFINITY {
            -bound
        } else {
            (a + b).clamp(-bound, bound)
        }
    }

    /// Expected degree of every node under the clamped prior.
    pub fn expected_degrees(&self) -> Vec<f64> {
        let n = self.lambda.len();
        (0..n)
            .map(|i| {
                (0..n)
                    .filter(|&j| j != i)
                    .map(|j| self.probability(i, j))
                    .sum()
            })
            .collect()
    }

    /// Largest `|expected − observed|` degree over all nodes.
    pub fn max_residual(&self, g: &Graph) -> f64 {
        self.expected_degrees()
            .iter()
            .enumerate()
            .map(|(i, e)| (e - g.degree(i) as f64).abs())
            .fold(0.0, f64::max)
    }
}

#[derive(Clone)]
struct DegreeClass {
    degree: usize,
    count: usize,
    lambda: f64,
}

/// `ln(1 + e^z)` without overflow.
fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

/// Free classes are those with finite λ; saturated partners enter as constants.
struct Dual {
    classes: Vec<DegreeClass>,
    free: Vec<usize>,
}

impl Dual {
    /// The classes with the free values replaced by `lambda`.
    fn classes_at(&self, lambda: &[f64]) -> Vec<DegreeClass> {
        let mut classes = self.classes.clone();
        for (x, &a) in self.free.iter().enumerate() {
            classes[a].lambda = lambda[x];
        }
        classes
    }

    /// Convex dual `Σ_pairs ln(1 + e^{λ_a+λ_b}) − Σ_nodes d·λ` over the free classes.
    /// Pairs with a `+∞` partner contribute their linear limit `λ_a`.
    fn objective(&self, lambda: &[f64]) -> f64 {
        let mut total = 0.0;
        for (x, &a) in self.free.iter().enumerate() {
            let ca = self.classes[a].count as f64;
            total -= ca * self.classes[a].degree as f64 * lambda[x];
            total += ca * (ca - 1.0) / 2.0 * softplus(2.0 * lambda[x]);
            for (y, &b) in self.free.iter().enumerate().skip(x + 1) {
                total += ca * self.classes[b].count as f64 * softplus(lambda[x] + lambda[y]);
            }
            for c in self.classes.iter().filter(|c| c.lambda == f64::INFINITY) {
                total += ca * c.count as f64 * lambda[x];
            }
        }
        total
    }

    /// Gradient (count × degree residual) and Hessian of [`objective`](Self::objective).
    fn derivatives(&self, lambda: &[f64]) -> (DVector<f64>, DMatrix<f64>) {
        let k = self.free.len();
        let mut grad = DVector::zeros(k);
        let mut hess = DMatrix::zeros(k, k);
        for (x, &a) in self.free.iter().enumerate() {
            let ca = self.classes[a].count as f64;
            let mut expected = 0.0;
            let mut curvature = 0.0;
            for (b, class) in self.classes.iter().enumerate() {
                let partners = if a == b { class.count - 1 } else { class.count } as f64;
                if partners == 0.0 {
                    continue;
                }
                let other = match self.free.iter().position(|&f| f == b) {
                    Some(y) => lambda[y],
                    None => class.lambda,
                };
                let p = pair_sigmoid(lambda[x], other);
                let dp = p * (1.0 - p);
                expected += partners * p;
                if a == b {
                    curvature += 2.0 * partners * dp;
                } else if let Some(y) = self.free.iter().position(|&f| f == b) {
                    curvature += partners * dp;
                    hess[(x, y)] = ca * partners * dp;
                } else {
                    curvature += partners * dp;
                }
            }
            grad[x] = ca * (expected - self.classes[a].degree as f64);
            hess[(x, x)] = ca * curvature;
        }
        (grad, hess)
    }
}

/// Clamped-probability residual of class `a`, as seen by [`DegreePrior::probability`].
fn clamped_residual(classes: &[DegreeClass], a: usize) -> f64 {
    let mut expected = 0.0;
    for (b, class) in classes.iter().enumerate() {
        let partners = if a == b { class.count - 1 } else { class.count };
        let p = pair_sigmoid(classes[a].lambda, class.lambda).clamp(PRIOR_EPS, 1.0 - PRIOR_EPS);
        expected += partners as f64 * p;
    }
    expected - classes[a].degree as f64
}

fn max_clamped_residual(classes: &[DegreeClass]) -> f64 {
    (0..classes.len())
        .map(|a| clamped_residual(classes, a).abs())
        .fold(0.0, f64::max)
}

/// Fits λ until every node's expected degree is within `tol` of its observed degree.
///
/// Nodes of equal degree share λ, and the per-degree values are found by damped
/// Newton steps on the convex dual. Degree sequences on the boundary of the
/// realizable set have their solution at infinity; the iterates then run off
/// towards `±LAMBDA_BOUND` and the residual still decays geometrically.
///
/// Degree-0 nodes get `λ = −∞` and degree-(n−1) nodes `λ = +∞`; their prior
/// probabilities are then clamped to `ε` and `1 − ε` respectively.
pub fn fit_degree_prior(g: &Graph, tol: f64) -> Result<DegreePrior> {
    let n = g.node_count();
    if n == 0 {
        return Err(Error::InvalidInput(
            "cannot fit a degree prior on an empty graph".into(),
        ));
    }
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for i in 0..n {
        *counts.entry(g.degree(i)).or_insert(0) += 1;
    }
    let span = (n - 1).max(1) as f64;
    let classes: Vec<DegreeClass> = counts
        .into_iter()
        .map(|(degree, count)| {
            let lambda = if degree == 0 {
                f64::NEG_INFINITY
            } else if degree == n - 1 {
                f64::INFINITY
            } else {
                let density = degree as f64 / span;
                0.5 * (density / (1.0 - density)).ln()
            };
            DegreeClass {
                degree,
                count,
                lambda,
            }
        })
        .collect();
    let dual = Dual {
        free: (0..classes.len())
            .filter(|&a| classes[a].lambda.is_finite())
            .collect(),
        classes,
    };
    let mut lambda: Vec<f64> = dual.free.iter().map(|&a| dual.classes[a].lambda).collect();
    let mut classes = dual.classes_at(&lambda);
    let mut residual = max_clamped_residual(&classes);
    let mut steps = 0;
    while residual >= tol && steps < MAX_NEWTON_STEPS {
        steps += 1;
        let (grad, mut hess) = dual.derivatives(&lambda);
        // A small ridge keeps the system solvable where probabilities saturate.
        let ridge = 1e-12 * hess.diagonal().amax().max(1.0);
        for x in 0..lambda.len() {
            hess[(x, x)] += ridge;
        }
        let mut step = match hess.cholesky() {
            Some(chol) => -chol.solve(&grad),
            None => -grad,
        };
        let longest = step.amax();
        if longest > MAX_NEWTON_MOVE {
            step *= MAX_NEWTON_MOVE / longest;
        }
        let current = dual.objective(&lambda);
        let mut scale = 1.0;
        let mut moved = false;
        for _ in 0..MAX_HALVINGS {
            let trial: Vec<f64> = lambda
                .iter()
                .zip(step.iter())
                .map(|(l, s)| (l + scale * s).clamp(-LAMBDA_BOUND, LAMBDA_BOUND))
                .collect();
            if dual.objective(&trial) <= current {
                moved = trial != lambda;
                lambda = trial;
                break;
            }
            scale *= 0.5;
        }
        classes = dual.classes_at(&lambda);
        residual = max_clamped_residual(&classes);
        if !moved {
            break;
        }
    }
    if residual < tol {
        let by_degree: BTreeMap<usize, f64> =
            classes.iter().map(|c| (c.degree, c.lambda)).collect();
        let lambda = (0..n).map(|i| by_degree[&g.degree(i)]).collect();
        return Ok(DegreePrior { lambda });
    }
    Err(Error::NonConvergence {
        what: "degree prior fit",
        iterations: steps,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))))
    }

    #[test]
    fn complete_graph_saturates() {
        let prior = fit_degree_prior(&complete(5), 1e-6).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                if i != j {
                    assert_eq!(prior.probability(i, j), 1.0 - PRIOR_EPS);
                }
            }
        }
    }

    #[test]
    fn regular_graph_is_uniform() {
        // 3-regular circulant on 10 nodes.
        let n = 10;
        let g = Graph::from_edges(n, (0..n).flat_map(|i| [(i, (i + 1) % n), (i, (i + 5) % n)]));
        assert!((0..n).all(|i| g.degree(i) == 3));
        let prior = fit_degree_prior(&g, 1e-9).unwrap();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    assert!((prior.probability(i, j) - 3.0 / 9.0).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn isolated_nodes_get_epsilon() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2)]);
        let prior = fit_degree_prior(&g, 1e-6).unwrap();
        assert_eq!(prior.probability(3, 0), PRIOR_EPS);
        assert!(prior.max_residual(&g) < 1e-6);
    }

    #[test]
    fn star_converges_despite_infinite_solution() {
        let g = Graph::from_edges(8, (1..8).map(|j| (0, j)));
        let prior = fit_degree_prior(&g, 1e-6).unwrap();
        assert!(prior.max_residual(&g) < 1e-6);
        assert_eq!(prior.probability(0, 3), 1.0 - PRIOR_EPS);
    }

    #[test]
    fn heterogeneous_degrees_match_by_direct_summation() {
        let edges = [
            (0, 1),
            (0, 2),
            (0, 3),
            (0, 4),
            (1, 2),
            (2, 3),
            (4, 5),
            (5, 6),
            (6, 7),
            (7, 4),
            (3, 8),
        ];
        let g = Graph::from_edges(9, edges);
        let prior = fit_degree_prior(&g, 1e-8).unwrap();
        for i in 0..9 {
            let expected: f64 = (0..9)
                .filter(|&j| j != i)
                .map(|j| prior.probability(i, j))
                .sum();
            assert!((expected - g.degree(i) as f64).abs() < 1e-8, "node {i}");
        }
    }
}
