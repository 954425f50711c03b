mod common;

use common::{arb_graph, gaussian_embedding, gnp};
use fondue_core::cne::{
    fit_degree_prior, fit_embedding, gradient_node, link_probability, log_likelihood, CneParams,
    Embedding, PROBABILITY_EPS,
};
use fondue_core::fixtures;
use proptest::prelude::*;

fn half_normal(d: f64, s: f64) -> f64 {
    (2.0 / std::f64::consts::PI).sqrt() / s * (-d * d / (2.0 * s * s)).exp()
}

/// Direct density ratio, no log-odds.
fn posterior(d: f64, prior: f64, p: &CneParams) -> f64 {
    let link = prior * half_normal(d, p.sigma1);
    link / (link + (1.0 - prior) * half_normal(d, p.sigma2))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn link_probability_matches_density_ratio(
        x in prop::collection::vec(-2.0f64..2.0, 3),
        y in prop::collection::vec(-2.0f64..2.0, 3),
        prior in 0.01f64..0.99,
    ) {
        let p = CneParams::default();
        let d = x.iter().zip(&y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        let got = link_probability(&x, &y, prior, &p).unwrap();
        let want = posterior(d, prior, &p);
        prop_assert!(got > 0.0 && got < 1.0);
        prop_assert!((got - want).abs() <= 1e-12 * want.max(1e-3), "{} vs {}", got, want);
    }

    #[test]
    fn link_probability_decreases_with_distance(
        prior in 0.001f64..0.999,
        r1 in 0.0f64..6.0,
        dr in 0.0f64..6.0,
    ) {
        let p = CneParams::default();
        let near = link_probability(&[r1], &[0.0], prior, &p).unwrap();
        let far = link_probability(&[r1 + dr], &[0.0], prior, &p).unwrap();
        prop_assert!(far <= near);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn prior_matches_observed_degrees(g in arb_graph(20)) {
        let prior = fit_degree_prior(&g, 1e-6).unwrap();
        let n = g.node_count();
        for i in 0..n {
            let mut expected = 0.0;
            for j in (0..n).filter(|&j| j != i) {
                let p = prior.probability(i, j);
                prop_assert!(p > 0.0 && p < 1.0);
                expected += p;
            }
            prop_assert!((expected - g.degree(i) as f64).abs() <= 1e-6 + 1e-9 * n as f64);
        }
    }

    #[test]
    fn likelihood_equals_pairwise_sum(g in arb_graph(14), dim in 1usize..4, seed in any::<u64>()) {
        let prior = fit_degree_prior(&g, 1e-6).unwrap();
        let emb = gaussian_embedding(g.node_count(), dim, seed);
        let p = CneParams { dim, ..CneParams::default() };
        let mut want = 0.0;
        for i in 0..g.node_count() {
            for j in i + 1..g.node_count() {
                let d = emb.point(i).iter().zip(emb.point(j)).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
                let q = posterior(d, prior.probability(i, j), &p).clamp(PROBABILITY_EPS, 1.0 - PROBABILITY_EPS);
                want += if g.has_edge(i, j) { q.ln() } else { (1.0 - q).ln() };
            }
        }
        let got = log_likelihood(&g, &emb, &prior).unwrap();
        prop_assert!((got - want).abs() <= 1e-9 * want.abs().max(1.0), "{} vs {}", got, want);
    }

    #[test]
    fn gradient_matches_central_differences(n in 2usize..12, density in 0.1f64..0.6, dim in 1usize..4, seed in any::<u64>()) {
        let g = gnp(n, density, seed);
        let prior = fit_degree_prior(&g, 1e-6).unwrap();
        let emb = gaussian_embedding(n, dim, seed ^ 0x5eed);
        let params = emb.params().clone();
        let h = 1e-5;
        for i in 0..n {
            let grad = gradient_node(&g, &emb, &prior, i).unwrap();
            let mut fd = vec![0.0; dim];
            for (k, slot) in fd.iter_mut().enumerate() {
                let shifted = |delta: f64| {
                    let mut c = emb.coords().to_vec();
                    c[i * dim + k] += delta;
                    log_likelihood(&g, &Embedding::from_coords(c, dim, params.clone()).unwrap(), &prior).unwrap()
                };
                *slot = (shifted(h) - shifted(-h)) / (2.0 * h);
            }
            let err = grad.iter().zip(&fd).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
            // Below 1e-4 the difference quotient is dominated by rounding in the objective.
            let scale = fd.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-4);
            prop_assert!(err / scale < 1e-4, "node {}: {:?} vs {:?}", i, grad, fd);
        }
    }
}

#[test]
fn fit_is_reproducible_and_finite() {
    let g = gnp(25, 0.2, 9);
    let params = CneParams {
        max_iter: 150,
        ..CneParams::default()
    };
    let a = fit_embedding(&g, &params, 4).unwrap();
    let b = fit_embedding(&g, &params, 4).unwrap();
    assert_eq!(a.coords(), b.coords());
    assert_eq!(a.node_count(), g.node_count());
    assert!(a.coords().iter().all(|v| v.is_finite()));
    let c = fit_embedding(&g, &params, 5).unwrap();
    assert_ne!(a.coords(), c.coords());
}

#[test]
fn fit_improves_on_its_start() {
    let g = fixtures::lesmis();
    let prior = fit_degree_prior(&g, 1e-6).unwrap();
    let params = CneParams {
        max_iter: 200,
        ..CneParams::default()
    };
    let start = gaussian_embedding(g.node_count(), params.dim, 0);
    let fitted = fit_embedding(&g, &params, 0).unwrap();
    assert!(
        log_likelihood(&g, &fitted, &prior).unwrap() > log_likelihood(&g, &start, &prior).unwrap()
    );
}

#[test]
fn bundled_priors_fit_within_tolerance() {
    for name in fixtures::BUNDLED {
        let g = fixtures::bundled(name).unwrap();
        assert!(
            fit_degree_prior(&g, 1e-6).unwrap().max_residual(&g) < 1e-6,
            "{name}"
        );
    }
}
