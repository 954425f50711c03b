//! Ranking and partition-agreement metrics.

use std::collections::HashMap;

use crate::baselines::Clustering;
use crate::error::{Error, Result};

/// Probability that a random positive outscores a random negative, ties counting one half.
///
/// Computed from average ranks, so equal scores must compare exactly equal to tie.
pub fn auc(scores: &[f64], labels: &[u8]) -> Result<f64> {
    if scores.len() != labels.len() {
        return Err(Error::DimensionMismatch {
            expected: labels.len(),
            actual: scores.len(),
        });
    }
    if scores.iter().any(|s| s.is_nan()) {
        return Err(Error::NonFinite("AUC scores"));
    }
    let positives = labels.iter().filter(|&&l| l != 0).count();
    let negatives = labels.len() - positives;
    if positives == 0 || negatives == 0 {
        return Err(Error::InvalidInput(
            "AUC needs at least one positive and one negative label".into(),
        ));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    // Twice the rank sum of the positives keeps every quantity integral.
    let mut twice_rank_sum: u64 = 0;
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && scores[order[end]] == scores[order[start]] {
            end += 1;
        }
        // Ranks start..end (1-based start+1..=end) average to (start + 1 + end) / 2.
        let twice_avg = (start + 1 + end) as u64;
        let tied_pos = order[start..end]
            .iter()
            .filter(|&&k| labels[k] != 0)
            .count() as u64;
        twice_rank_sum += twice_avg * tied_pos;
        start = end;
    }
    let p = positives as u64;
    let twice_u = twice_rank_sum - p * (p + 1);
    Ok(twice_u as f64 / (2 * p * negatives as u64) as f64)
}

fn pairs(k: u64) -> u64 {
    k * k.saturating_sub(1) / 2
}

/// Adjusted Rand index of two clusterings of the same elements.
///
/// When both clusterings are the same trivial partition (all singletons or a
/// single cluster) the chance-corrected ratio is 0/0 and the result is 1.
pub fn adjusted_rand_index(p1: &Clustering, p2: &Clustering) -> Result<f64> {
    let universe = p1.universe();
    if universe != p2.universe() {
        return Err(Error::InvalidInput(
            "clusterings cover different elements".into(),
        ));
    }
    let mut second = HashMap::with_capacity(universe.len());
    for (c, members) in p2.clusters().iter().enumerate() {
        for &v in members {
            second.insert(v, c);
        }
    }
    let mut index: u64 = 0;
    let mut cells: HashMap<usize, u64> = HashMap::new();
    for members in p1.clusters() {
        cells.clear();
        for v in members {
            *cells.entry(second[v]).or_insert(0) += 1;
        }
        index += cells.values().map(|&c| pairs(c)).sum::<u64>();
    }
    let a: u64 = p1.clusters().iter().map(|c| pairs(c.len() as u64)).sum();
    let b: u64 = p2.clusters().iter().map(|c| pairs(c.len() as u64)).sum();
    let total = pairs(universe.len() as u64);
    if total == 0 {
        return Ok(1.0);
    }
    let expected = a as f64 * b as f64 / total as f64;
    let max = 0.5 * (a + b) as f64;
    if max == expected {
        return Ok(1.0);
    }
    Ok((index as f64 - expected) / (max - expected))
}
