mod common;

use std::collections::BTreeSet;

use common::arb_graph;
use fondue_core::contraction::{merge_count, sample_contraction};
use fondue_core::graph::{ego_network, parse_edge_list};
use fondue_core::Graph;
use proptest::prelude::*;

fn check_simple(g: &Graph) {
    let mut seen = BTreeSet::new();
    for (i, j) in g.edges() {
        assert!(i < j, "edge ({i},{j}) not stored with i < j");
        assert!(seen.insert((i, j)), "duplicate edge");
    }
    for i in 0..g.node_count() {
        let nb = g.neighbors(i);
        assert!(
            nb.windows(2).all(|w| w[0] < w[1]),
            "neighbors of {i} not strictly sorted"
        );
        for &j in nb {
            assert_ne!(i, j);
            assert!(seen.contains(&(i.min(j), i.max(j))));
        }
    }
    let degree_sum: usize = (0..g.node_count()).map(|i| g.degree(i)).sum();
    assert_eq!(degree_sum, 2 * g.edge_count());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parsed_graphs_are_simple(pairs in prop::collection::vec((0u8..12, 0u8..12), 0..60)) {
        let text: String = pairs.iter().map(|(a, b)| format!("v{a} v{b}\n")).collect();
        let parsed = parse_edge_list(&text, std::path::Path::new("prop")).unwrap();
        check_simple(&parsed.graph);
        let loops = pairs.iter().filter(|(a, b)| a == b).count();
        prop_assert_eq!(parsed.self_loops, loops);
        let distinct: BTreeSet<(u8, u8)> =
            pairs.iter().filter(|(a, b)| a != b).map(|&(a, b)| (a.min(b), a.max(b))).collect();
        prop_assert_eq!(parsed.graph.edge_count(), distinct.len());
        for (k, label) in parsed.graph.labels().iter().enumerate() {
            prop_assert_eq!(parsed.graph.id_of(label), Some(k));
        }
    }

    #[test]
    fn ego_network_excludes_center(g in arb_graph(15), pick in any::<prop::sample::Index>()) {
        let i = pick.index(g.node_count());
        let ego = ego_network(&g, i, false);
        prop_assert!(!ego.members.contains(&i));
        prop_assert_eq!(&ego.members[..], g.neighbors(i));
        check_simple(&ego.graph);
        let with = ego_network(&g, i, true);
        prop_assert!(with.members.contains(&i));
    }

    #[test]
    fn contraction_bookkeeping(g in arb_graph(30), r in 0.0f64..0.5, seed in any::<u64>()) {
        let n = g.node_count();
        let rec = sample_contraction(&g, r, seed).unwrap();
        let map = &rec.map;
        let n_hat = rec.contracted_graph.node_count();
        let total: usize = (0..n_hat).map(|i| map.multiplicity(i)).sum();
        prop_assert_eq!(total, n);
        prop_assert!((0..n_hat).all(|i| (1..=2).contains(&map.multiplicity(i))));
        for v in 0..n {
            prop_assert!(map.preimage(map.image(v)).contains(&v));
        }
        let ambiguous = rec.truth_labels.iter().filter(|&&l| l == 1).count();
        prop_assert_eq!(ambiguous, merge_count(n, r));
        prop_assert_eq!(ambiguous, (r * n as f64 + 1e-9).floor() as usize);
        for i in 0..n_hat {
            prop_assert_eq!(rec.truth_labels[i] == 1, map.multiplicity(i) == 2);
        }
        check_simple(&rec.contracted_graph);
        // Every contracted edge has a preimage edge and every original edge survives unless it became a loop.
        for (a, b) in rec.contracted_graph.edges() {
            let found = map.preimage(a).iter().any(|&k| map.preimage(b).iter().any(|&l| g.has_edge(k, l)));
            prop_assert!(found, "contracted edge ({}, {}) has no preimage", a, b);
        }
        for (k, l) in g.edges() {
            let (a, b) = (map.image(k), map.image(l));
            prop_assert!(a == b || rec.contracted_graph.has_edge(a, b));
        }
        // Truth partitions cover each ambiguous neighborhood by origin.
        for p in &rec.truth_partitions {
            let pre = map.preimage(p.node);
            let (kept, absorbed) = (pre[0], pre[1]);
            let side = |v: usize| -> (bool, bool) {
                let from = |o: usize| map.preimage(v).iter().any(|&u| g.has_edge(o, u));
                (from(kept), from(absorbed))
            };
            let mut all: Vec<usize> = p.kept.iter().chain(&p.absorbed).chain(&p.shared).copied().collect();
            all.sort_unstable();
            prop_assert_eq!(&all[..], rec.contracted_graph.neighbors(p.node));
            prop_assert!(p.kept.iter().all(|&v| side(v) == (true, false)));
            prop_assert!(p.absorbed.iter().all(|&v| side(v) == (false, true)));
            prop_assert!(p.shared.iter().all(|&v| side(v) == (true, true)));
        }
    }

    #[test]
    fn contraction_is_reproducible(g in arb_graph(25), r in 0.0f64..0.5, seed in any::<u64>()) {
        let a = sample_contraction(&g, r, seed).unwrap();
        let b = sample_contraction(&g, r, seed).unwrap();
        prop_assert_eq!(a.to_document(), b.to_document());
        prop_assert_eq!(a.contracted_graph, b.contracted_graph);
    }
}
