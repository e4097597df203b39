use proptest::prelude::*;

use rrw_core::graph::{random_connected_graph, random_tree, Edge, EdgeSet, FiniteGraph};
use rrw_core::interlacing::{check_laplacian_interlacing, check_rrw_interlacing};
use rrw_core::par::{map_indexed, Execution};
use rrw_core::percolation::{annealed_return, AnnealedOptions, PercolationConfig};
use rrw_core::rng::sub_seed;
use rrw_core::spectral::{heat_trace_average, rrw_spectrum, Spectrum};
use rrw_core::trees::{central_edge, split_ratio_ceiling};

fn graph_strategy() -> impl Strategy<Value = (FiniteGraph, usize)> {
    (2usize..16, 2usize..5, 0usize..6, any::<u64>())
        .prop_map(|(n, d, extra, seed)| (random_connected_graph(n, d, extra, seed).unwrap(), d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn spectrum_has_one_value_per_vertex((g, d) in graph_strategy()) {
        let s = rrw_spectrum(&g, d).unwrap();
        prop_assert_eq!(s.len(), g.order());
        prop_assert!((s.values[0] - 1.0).abs() < 1e-9);
        prop_assert!(s.values.iter().all(|b| *b >= -1.0 - 1e-9 && *b <= 1.0 + 1e-9));
    }

    #[test]
    fn heat_trace_is_a_decreasing_probability((g, d) in graph_strategy(), t in 0.0f64..50.0) {
        let s = rrw_spectrum(&g, d).unwrap();
        let a = heat_trace_average(&s, t);
        let b = heat_trace_average(&s, t + 1.0);
        prop_assert!(a > 0.0 && a <= 1.0 + 1e-12);
        prop_assert!(b <= a + 1e-12);
        prop_assert!(b >= 1.0 / g.order() as f64 - 1e-12);
    }

    #[test]
    fn single_edge_removal_interlaces((g, d) in graph_strategy(), pick in any::<prop::sample::Index>()) {
        let e = g.edges()[pick.index(g.size())];
        prop_assert!(check_rrw_interlacing(&g, &EdgeSet::single(e), d).unwrap().passed());
        prop_assert!(check_laplacian_interlacing(&g, e).unwrap().passed());
    }

    #[test]
    fn central_edge_ratio_bounded(n in 2usize..80, d in 2usize..6, seed in any::<u64>()) {
        let t = random_tree(n, d, seed).unwrap();
        let s = central_edge(&t).unwrap();
        prop_assert!(s.ratio >= 1.0);
        prop_assert!(s.size_u + s.size_v == n);
        prop_assert!(s.ratio <= split_ratio_ceiling(d.max(2)) + 1e-12);
    }

    #[test]
    fn sub_seed_is_a_function(master in any::<u64>(), i in any::<u64>(), j in any::<u64>()) {
        prop_assert_eq!(sub_seed(master, i), sub_seed(master, i));
        if i != j {
            prop_assert_ne!(sub_seed(master, i), sub_seed(master, j));
        }
    }

    #[test]
    fn graph_and_spectrum_round_trip((g, d) in graph_strategy()) {
        prop_assert_eq!(FiniteGraph::from_json(&g.to_json().unwrap()).unwrap(), g.clone());
        let s = rrw_spectrum(&g, d).unwrap();
        let back = Spectrum::from_json(&s.to_json().unwrap()).unwrap();
        prop_assert_eq!(back.order, s.order);
        for (a, b) in back.values.iter().zip(&s.values) {
            prop_assert!((a - b).abs() <= 1e-15 * a.abs().max(1.0));
        }
    }
}

#[test]
fn map_indexed_keeps_order() {
    let f = |i: usize| sub_seed(7, i as u64);
    assert_eq!(map_indexed(1000, Execution::Sequential, f), map_indexed(1000, Execution::Parallel, f));
}

#[test]
fn sequential_and_parallel_estimates_agree() {
    let cfg = PercolationConfig::lattice(24, 2, true, 0.4, 5, 300);
    let t = [1.0, 10.0, 100.0];
    let run = |execution| {
        let opts = AnnealedOptions { execution, ..AnnealedOptions::default() };
        annealed_return(&cfg.sampler(), &t, cfg.n_samples, cfg.seed, &opts).unwrap()
    };
    assert_eq!(run(Execution::Sequential), run(Execution::Parallel));
}

#[test]
fn krylov_matches_dense() {
    let cfg = PercolationConfig::lattice(32, 2, true, 0.45, 11, 200);
    let t = [0.5, 5.0, 50.0];
    let dense = AnnealedOptions { dense_limit: 2000, ..AnnealedOptions::default() };
    let krylov = AnnealedOptions { dense_limit: 1, ..AnnealedOptions::default() };
    let a = annealed_return(&cfg.sampler(), &t, cfg.n_samples, cfg.seed, &dense).unwrap();
    let b = annealed_return(&cfg.sampler(), &t, cfg.n_samples, cfg.seed, &krylov).unwrap();
    for k in 0..t.len() {
        assert!((a.mean_return[k] - b.mean_return[k]).abs() < 1e-10, "t = {}", t[k]);
    }
    assert!(b.max_remainder <= 1e-12);
}

#[test]
fn removing_a_bridge_still_interlaces() {
    let g = FiniteGraph::from_pairs(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
    let r = EdgeSet::single(Edge::new(1, 2).unwrap());
    assert!(check_rrw_interlacing(&g, &r, 2).unwrap().passed());
}
