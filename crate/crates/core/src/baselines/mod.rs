//! Structural ambiguity measures computed on center-removed ego networks,
//! and the MCL splitting baseline.

mod mcl;

pub use mcl::{mcl_cluster, Clustering, MclOutcome, MclParams};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{connected_components, ego_network, Graph};
use crate::scores::{ScoreRow, ScoreTable};

/// `Σ_C W(C, C̄) / (W(C, C) + W(C, C̄))`, with `W(C, C)` counting ordered
/// pairs (each internal edge twice). A cluster with no incident edges adds 0.
pub fn normalized_cut(g: &Graph, clustering: &Clustering) -> f64 {
    let mut cluster_of = vec![usize::MAX; g.node_count()];
    for (c, members) in clustering.clusters().iter().enumerate() {
        for &v in members {
            cluster_of[v] = c;
        }
    }
    clustering
        .clusters()
        .iter()
        .enumerate()
        .map(|(c, members)| {
            let (mut internal, mut cut) = (0usize, 0usize);
            for &v in members {
                for &w in g.neighbors(v) {
                    if cluster_of[w] == c {
                        internal += 1;
                    } else {
                        cut += 1;
                    }
                }
            }
            if internal + cut == 0 {
                0.0
            } else {
                cut as f64 / (internal + cut) as f64
            }
        })
        .sum()
}

/// Normalized cut of the MCL clustering of `i`'s center-removed ego network.
pub fn normalized_cut_score(g: &Graph, i: usize, p: &MclParams) -> Result<f64> {
    if g.degree(i) < 2 {
        return Ok(0.0);
    }
    let ego = ego_network(g, i, false);
    let out = mcl_cluster(&ego.graph, p)?;
    Ok(normalized_cut(&ego.graph, &out.clustering))
}

/// Number of connected components of `i`'s center-removed ego network.
pub fn cc_score(g: &Graph, i: usize) -> usize {
    connected_components(&ego_network(g, i, false).graph).len()
}

pub fn degree_score(g: &Graph, i: usize) -> usize {
    g.degree(i)
}

/// Result of clustering a node's neighborhood with MCL.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MclSplit {
    /// Two or more neighbor groups, in the graph's node ids.
    Groups(Vec<Vec<usize>>),
    /// MCL put every neighbor in one cluster.
    Unsplittable(Vec<usize>),
}

impl MclSplit {
    /// The neighbor clustering, with an unsplittable result as a single cluster.
    pub fn clustering(&self) -> Clustering {
        match self {
            MclSplit::Groups(groups) => Clustering::new(groups.clone()),
            MclSplit::Unsplittable(all) => Clustering::new(vec![all.clone()]),
        }
        .expect("neighbor groups are disjoint")
    }
}

/// MCL clusters of `i`'s center-removed ego network, mapped back to neighbor ids.
pub fn mcl_split(g: &Graph, i: usize, p: &MclParams) -> Result<MclSplit> {
    let degree = g.degree(i);
    if degree < 2 {
        return Err(Error::Degenerate { node: i, degree });
    }
    let ego = ego_network(g, i, false);
    let out = mcl_cluster(&ego.graph, p)?;
    let groups: Vec<Vec<usize>> = out
        .clustering
        .clusters()
        .iter()
        .map(|c| c.iter().map(|&k| ego.members[k]).collect())
        .collect();
    Ok(if groups.len() == 1 {
        MclSplit::Unsplittable(groups.into_iter().next().unwrap_or_default())
    } else {
        MclSplit::Groups(groups)
    })
}

/// Which baseline measure to tabulate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Baseline {
    Nc,
    Cc,
    Degree,
}

impl Baseline {
    pub fn as_str(self) -> &'static str {
        match self {
            Baseline::Nc => "nc",
            Baseline::Cc => "cc",
            Baseline::Degree => "degree",
        }
    }
}

/// Scores every node with one baseline measure.
pub fn baseline_scores(g: &Graph, method: Baseline, p: &MclParams) -> Result<ScoreTable> {
    let rows = (0..g.node_count())
        .into_par_iter()
        .map(|i| {
            let score = match method {
                Baseline::Nc => normalized_cut_score(g, i, p)?,
                Baseline::Cc => cc_score(g, i) as f64,
                Baseline::Degree => degree_score(g, i) as f64,
            };
            Ok(ScoreRow {
                node: i,
                score,
                method: method.as_str().into(),
                degree: g.degree(i),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScoreTable { rows })
}
