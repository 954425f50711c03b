//! Markov clustering on a sparse column-stochastic matrix.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MclParams {
    pub expansion: u32,
    pub inflation: f64,
    pub self_loop: f64,
    pub max_iter: usize,
    pub convergence_tol: f64,
    pub prune_threshold: f64,
}

impl Default for MclParams {
    fn default() -> Self {
        MclParams {
            expansion: 2,
            inflation: 2.0,
            self_loop: 1.0,
            max_iter: 100,
            convergence_tol: 1e-6,
            prune_threshold: 1e-5,
        }
    }
}

impl MclParams {
    pub fn validate(&self) -> Result<()> {
        if self.expansion < 2 {
            return Err(Error::InvalidInput(format!(
                "MCL expansion must be ≥ 2, got {}",
                self.expansion
            )));
        }
        if !(self.inflation > 1.0) {
            return Err(Error::InvalidInput(format!(
                "MCL inflation must be > 1, got {}",
                self.inflation
            )));
        }
        if !(self.self_loop >= 0.0)
            || !(self.prune_threshold >= 0.0)
            || !(self.convergence_tol > 0.0)
        {
            return Err(Error::InvalidInput(
                "MCL weights and tolerances must be non-negative".into(),
            ));
        }
        Ok(())
    }
}

/// Disjoint non-empty node sets. Each set is sorted; sets are ordered by their smallest member.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Clustering {
    clusters: Vec<Vec<usize>>,
}

impl Clustering {
    pub fn new(clusters: Vec<Vec<usize>>) -> Result<Self> {
        let mut clusters: Vec<Vec<usize>> = clusters
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c
            })
            .collect();
        if clusters.iter().any(|c| c.is_empty()) {
            return Err(Error::InvalidInput(
                "clustering contains an empty cluster".into(),
            ));
        }
        let mut all: Vec<usize> = clusters.iter().flatten().copied().collect();
        let total = all.len();
        all.sort_unstable();
        all.dedup();
        if all.len() != total || clusters.iter().any(|c| c.windows(2).any(|w| w[0] == w[1])) {
            return Err(Error::InvalidInput("clusters overlap".into()));
        }
        clusters.sort_by_key(|c| c[0]);
        Ok(Clustering { clusters })
    }

    /// Clustering from a per-element label vector over `0..labels.len()`.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut by_label: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for (i, &l) in labels.iter().enumerate() {
            by_label.entry(l).or_default().push(i);
        }
        Clustering::new(by_label.into_values().collect()).expect("labels define a partition")
    }

    pub fn clusters(&self) -> &[Vec<usize>] {
        &self.clusters
    }

    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    /// All clustered elements, sorted.
    pub fn universe(&self) -> Vec<usize> {
        let mut all: Vec<usize> = self.clusters.iter().flatten().copied().collect();
        all.sort_unstable();
        all
    }

    /// Drops the given elements, removing clusters that become empty.
    pub fn without(&self, removed: &[usize]) -> Clustering {
        let clusters = self
            .clusters
            .iter()
            .map(|c| {
                c.iter()
                    .copied()
                    .filter(|x| !removed.contains(x))
                    .collect::<Vec<_>>()
            })
            .filter(|c| !c.is_empty())
            .collect();
        Clustering::new(clusters).expect("subset of a partition")
    }

    /// Renames every element through `f`.
    pub fn map(&self, f: impl Fn(usize) -> usize) -> Result<Clustering> {
        Clustering::new(
            self.clusters
                .iter()
                .map(|c| c.iter().map(|&x| f(x)).collect())
                .collect(),
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MclOutcome {
    pub clustering: Clustering,
    pub converged: bool,
    pub iterations: usize,
}

/// Sparse matrix stored by column; each column holds `(row, value)` sorted by row.
type Columns = Vec<Vec<(usize, f64)>>;

fn normalize(col: &mut [(usize, f64)]) {
    let sum: f64 = col.iter().map(|e| e.1).sum();
    if sum > 0.0 {
        col.iter_mut().for_each(|e| e.1 /= sum);
    }
}

fn multiply(a: &Columns, b: &Columns) -> Columns {
    let n = a.len();
    let mut acc = vec![0.0; n];
    let mut touched = Vec::new();
    b.iter()
        .map(|bcol| {
            for &(k, bk) in bcol {
                for &(r, ar) in &a[k] {
                    if acc[r] == 0.0 {
                        touched.push(r);
                    }
                    acc[r] += ar * bk;
                }
            }
            touched.sort_unstable();
            touched.dedup();
            let col = touched
                .iter()
                .map(|&r| (r, acc[r]))
                .filter(|e| e.1 != 0.0)
                .collect();
            for &r in &touched {
                acc[r] = 0.0;
            }
            touched.clear();
            col
        })
        .collect()
}

fn inflate(m: &mut Columns, p: &MclParams) {
    for col in m.iter_mut() {
        col.iter_mut().for_each(|e| e.1 = e.1.powf(p.inflation));
        normalize(col);
        let max = col.iter().map(|e| e.1).fold(0.0, f64::max);
        col.retain(|e| e.1 >= p.prune_threshold || e.1 == max);
        normalize(col);
    }
}

fn max_change(a: &Columns, b: &Columns) -> f64 {
    let mut change: f64 = 0.0;
    for (ca, cb) in a.iter().zip(b) {
        let (mut x, mut y) = (0, 0);
        loop {
            let d = match (ca.get(x), cb.get(y)) {
                (Some(&(ra, va)), Some(&(rb, vb))) => match ra.cmp(&rb) {
                    std::cmp::Ordering::Equal => {
                        x += 1;
                        y += 1;
                        va - vb
                    }
                    std::cmp::Ordering::Less => {
                        x += 1;
                        va
                    }
                    std::cmp::Ordering::Greater => {
                        y += 1;
                        vb
                    }
                },
                (Some(&(_, va)), None) => {
                    x += 1;
                    va
                }
                (None, Some(&(_, vb))) => {
                    y += 1;
                    vb
                }
                (None, None) => break,
            };
            change = change.max(d.abs());
        }
    }
    change
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        parent[hi] = lo;
    }
}

/// Reads clusters from a (near-)converged MCL matrix.
///
/// Attractors are nodes with mass on their own diagonal. Each node joins the
/// attractor with the largest entry in its column (any row if no attractor has
/// mass there); attractors holding mass in each other's columns are merged.
fn interpret(m: &Columns) -> Clustering {
    let n = m.len();
    let attractor: Vec<bool> = (0..n)
        .map(|a| m[a].iter().any(|&(r, v)| r == a && v > 0.0))
        .collect();
    let mut parent: Vec<usize> = (0..n).collect();
    for (j, col) in m.iter().enumerate() {
        let best = |only_attractors: bool| {
            col.iter()
                .filter(|&&(r, v)| v > 0.0 && (!only_attractors || attractor[r]))
                .fold(None, |acc: Option<(usize, f64)>, &(r, v)| match acc {
                    Some((_, bv)) if bv >= v => acc,
                    _ => Some((r, v)),
                })
        };
        if let Some((r, _)) = best(true).or_else(|| best(false)) {
            union(&mut parent, j, r);
        }
        if attractor[j] {
            for &(r, v) in col {
                if attractor[r] && v > 0.0 {
                    union(&mut parent, j, r);
                }
            }
        }
    }
    let labels: Vec<usize> = (0..n).map(|x| find(&mut parent, x)).collect();
    Clustering::from_labels(&labels)
}

/// Clusters `g` by Markov clustering. Non-convergence within `max_iter` is
/// reported through [`MclOutcome::converged`] rather than as an error.
pub fn mcl_cluster(g: &Graph, p: &MclParams) -> Result<MclOutcome> {
    p.validate()?;
    let n = g.node_count();
    let mut m: Columns = (0..n)
        .map(|j| {
            let mut col: Vec<(usize, f64)> = g.neighbors(j).iter().map(|&r| (r, 1.0)).collect();
            if p.self_loop > 0.0 || col.is_empty() {
                let w = if p.self_loop > 0.0 { p.self_loop } else { 1.0 };
                let pos = col.partition_point(|e| e.0 < j);
                col.insert(pos, (j, w));
            }
            normalize(&mut col);
            col
        })
        .collect();
    let mut converged = false;
    let mut iterations = 0;
    while iterations < p.max_iter {
        iterations += 1;
        let mut next = m.clone();
        for _ in 1..p.expansion {
            next = multiply(&next, &m);
        }
        inflate(&mut next, p);
        let change = max_change(&m, &next);
        m = next;
        if change < p.convergence_tol {
            converged = true;
            break;
        }
    }
    if !converged {
        log::warn!("MCL did not converge within {} iterations", p.max_iter);
    }
    Ok(MclOutcome {
        clustering: interpret(&m),
        converged,
        iterations,
    })
}
