#![allow(dead_code)]

use fondue_core::cne::{CneParams, Embedding};
use fondue_core::Graph;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Random simple graph on `1..=max_n` nodes; each pair is present with probability ~`density`.
pub fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n, any::<u64>(), 0.05f64..0.7).prop_map(|(n, seed, p)| gnp(n, p, seed))
}

pub fn gnp(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random::<f64>() < p {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(n, edges)
}

pub fn gaussian_embedding(n: usize, dim: usize, seed: u64) -> Embedding {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coords = (0..n * dim).map(|_| rng.sample(StandardNormal)).collect();
    Embedding::from_coords(
        coords,
        dim,
        CneParams {
            dim,
            ..CneParams::default()
        },
    )
    .unwrap()
}

/// Star: node 0 joined to nodes `1..=k`.
pub fn star(k: usize) -> Graph {
    Graph::from_edges(k + 1, (1..=k).map(|j| (0, j)))
}
