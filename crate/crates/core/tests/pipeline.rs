use std::collections::BTreeMap;

use fondue_core::cne::{fit_embedding, CneParams};
use fondue_core::experiment::{
    emit_report, load_report, mean, run_experiment, sample_std, Dataset, ExperimentConfig,
    ExperimentKind, Method,
};
use fondue_core::fondue::{
    best_split, greedy_disambiguate, score_all_nodes, GreedyConfig, HeuristicConfig,
};
use fondue_core::synth::SynthSpec;
use fondue_core::Graph;

/// Two K5s (0..5, 5..10) plus node 10 adjacent to all of them.
fn bridged_cliques() -> Graph {
    let mut edges = Vec::new();
    for block in [0, 5] {
        for i in block..block + 5 {
            for j in i + 1..block + 5 {
                edges.push((i, j));
            }
        }
    }
    edges.extend((0..10).map(|j| (j, 10)));
    Graph::from_edges(11, edges)
}

#[test]
fn bridge_node_scores_highest() {
    let g = bridged_cliques();
    let emb = fit_embedding(&g, &CneParams::default(), 7).unwrap();
    let table = score_all_nodes(&g, &emb, &HeuristicConfig::default()).unwrap();
    assert_eq!(table.sorted_desc()[0].node, 10);
    assert_eq!(table.rank_of(10), Some(0));
}

#[test]
fn greedy_split_separates_the_cliques() {
    let g = bridged_cliques();
    let out = greedy_disambiguate(
        &g,
        &GreedyConfig {
            seed: 0,
            ..GreedyConfig::default()
        },
        1,
    )
    .unwrap();
    assert_eq!(out.log.len(), 1);
    assert_eq!(out.log[0].node, g.label(10));
    let mut sides = [
        out.graph.neighbors(10).to_vec(),
        out.graph.neighbors(11).to_vec(),
    ];
    sides.sort();
    assert_eq!(sides, [vec![0, 1, 2, 3, 4], vec![5, 6, 7, 8, 9]]);
    assert_eq!(out.graph.label(11), format!("{}#2", g.label(10)));
    assert_eq!(out.embedding.node_count(), 12);
}

#[test]
fn clique_split_is_usually_optimal() {
    // A poor local optimum of the embedding can put one clique member off-axis,
    // and the quotient then prefers isolating it.
    let g = bridged_cliques();
    let clique = |s: &fondue_core::fondue::SplitResult| {
        let mut sides = [s.groups.0.clone(), s.groups.1.clone()];
        sides.sort();
        sides == [vec![0, 1, 2, 3, 4], vec![5, 6, 7, 8, 9]]
    };
    let hits = (0..10)
        .filter(|&seed| {
            let emb = fit_embedding(&g, &CneParams::default(), seed).unwrap();
            clique(&best_split(&g, &emb, 10, &HeuristicConfig::default()).unwrap())
        })
        .count();
    assert!(hits >= 7, "clique split optimal in {hits}/10 embeddings");
}

fn small_config(kind: ExperimentKind) -> ExperimentConfig {
    let methods = match kind {
        ExperimentKind::Identification => {
            vec![Method::Fondue, Method::Degree, Method::Cc, Method::Nc]
        }
        ExperimentKind::Splitting => vec![Method::Fondue, Method::Mcl],
    };
    ExperimentConfig {
        experiment: kind,
        datasets: vec![Dataset::Synthetic {
            spec: SynthSpec::planted(3, 12, 0.5, 0.05),
            seed: 2,
        }],
        ratios: vec![0.1, 0.2],
        seeds: vec![0, 1, 2],
        methods,
        embedding: CneParams {
            max_iter: 200,
            ..CneParams::default()
        },
        ..ExperimentConfig::default()
    }
}

#[test]
fn identification_report_is_deterministic_and_recomputable() {
    let cfg = small_config(ExperimentKind::Identification);
    let a = run_experiment(&cfg).unwrap();
    let b = run_experiment(&cfg).unwrap();
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap()
    );
    assert!(!a.rows.is_empty());
    let mut groups: BTreeMap<(String, u64, Method, String), Vec<f64>> = BTreeMap::new();
    for r in &a.rows {
        assert!((0.0..=1.0).contains(&r.value));
        groups
            .entry((
                r.dataset.clone(),
                r.ratio.to_bits(),
                r.method,
                r.metric.clone(),
            ))
            .or_default()
            .push(r.value);
    }
    assert_eq!(groups.len(), a.aggregates.len());
    for agg in &a.aggregates {
        let values = &groups[&(
            agg.dataset.clone(),
            agg.ratio.to_bits(),
            agg.method,
            agg.metric.clone(),
        )];
        assert_eq!(agg.count, values.len());
        assert_eq!(agg.mean, mean(values));
        assert_eq!(agg.std, sample_std(values));
    }
}

#[test]
fn splitting_report_covers_both_methods() {
    let cfg = small_config(ExperimentKind::Splitting);
    let rep = run_experiment(&cfg).unwrap();
    for m in [Method::Fondue, Method::Mcl] {
        assert!(rep.node_rows.iter().any(|r| r.method == m));
    }
    for r in &rep.node_rows {
        assert!((-1.0..=1.0).contains(&r.ari));
    }
    let dir = tempfile::tempdir().unwrap();
    emit_report(&rep, dir.path()).unwrap();
    let back = load_report(dir.path()).unwrap();
    assert_eq!(back, rep);
}
