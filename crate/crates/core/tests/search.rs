//! Search results against independent references.

use proptest::prelude::*;

use emoa::io::{synthesize_random_costs, GridMap};
use emoa::oracle::brute_force_pareto;
use emoa::search::compute_heuristics;
use emoa::{solve, Algorithm, CostVector, Graph, SolverConfig};

/// Per-objective shortest distances to `target` by Bellman-Ford.
fn bellman_ford(graph: &Graph, target: usize, objective: usize) -> Vec<Option<u64>> {
    let mut dist = vec![None; graph.num_vertices()];
    dist[target] = Some(0);
    for _ in 0..graph.num_vertices() {
        let mut changed = false;
        for (tail, arc) in graph.arcs() {
            if let Some(d) = dist[arc.head] {
                let cand = d + arc.cost.as_slice()[objective];
                if dist[tail].is_none_or(|cur| cand < cur) {
                    dist[tail] = Some(cand);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    dist
}

fn algorithms(m: usize) -> Vec<Algorithm> {
    Algorithm::ALL
        .into_iter()
        .filter(|a| a.supports(m))
        .collect()
}

fn random_graph() -> impl Strategy<Value = (Graph, usize, usize)> {
    (2usize..9, 2usize..5).prop_flat_map(|(n, m)| {
        let arc = (0..n, 0..n, prop::collection::vec(1u64..6, m));
        (
            Just(n),
            Just(m),
            prop::collection::vec(arc, 0..3 * n),
            0..n,
            0..n,
        )
            .prop_map(|(n, m, arcs, s, t)| {
                let mut g = Graph::new(n, m).unwrap();
                for (u, v, c) in arcs {
                    g.add_arc(u, v, &c).unwrap();
                }
                (g, s, t)
            })
    })
}

fn solve_costs(graph: &Graph, s: usize, t: usize, algorithm: Algorithm) -> Vec<CostVector> {
    let result = solve(graph, s, t, &SolverConfig::new(algorithm).verifying()).unwrap();
    let report = result.invariants.as_ref().unwrap();
    assert_eq!(report.total_violations(), 0, "{algorithm}: {report:?}");
    for p in result.paths().unwrap() {
        assert_eq!(p.vertices.first(), Some(&s));
        assert_eq!(p.vertices.last(), Some(&t));
        assert!(p.is_realized_by(graph), "{algorithm}: {p:?}");
    }
    result.costs()
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 300,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn heuristics_match_bellman_ford((graph, _s, t) in random_graph()) {
        let h = compute_heuristics(&graph, t).unwrap();
        let per_objective: Vec<_> = (0..graph.num_objectives()).map(|i| bellman_ford(&graph, t, i)).collect();
        for v in 0..graph.num_vertices() {
            let expect: Option<Vec<u64>> = per_objective.iter().map(|d| d[v]).collect();
            prop_assert_eq!(h.get(v).map(|c| c.as_slice().to_vec()), expect);
        }
        prop_assert!(h.is_consistent(&graph));
    }

    #[test]
    fn every_algorithm_matches_the_oracle((graph, s, t) in random_graph()) {
        let expect: Vec<CostVector> = brute_force_pareto(&graph, s, t, 1_000_000)
            .unwrap()
            .into_iter()
            .map(|p| p.cost)
            .collect();
        for algorithm in algorithms(graph.num_objectives()) {
            prop_assert_eq!(&solve_costs(&graph, s, t, algorithm), &expect, "{}", algorithm);
        }
    }
}

#[test]
fn empty_grids_agree_with_oracle() {
    let grid = GridMap::empty(5, 5).unwrap();
    for m in 2..=4 {
        for seed in 0..4 {
            let graph = synthesize_random_costs(&grid, m, seed, 1, 10).unwrap();
            let (s, t) = (grid.lower_left(), grid.upper_right());
            let expect: Vec<CostVector> = brute_force_pareto(&graph, s, t, 10_000_000)
                .unwrap()
                .into_iter()
                .map(|p| p.cost)
                .collect();
            for algorithm in algorithms(m) {
                assert_eq!(
                    solve_costs(&graph, s, t, algorithm),
                    expect,
                    "{algorithm} M={m} seed={seed}"
                );
            }
        }
    }
}

#[test]
fn namoa_agrees_with_emoa_on_larger_grids() {
    let grid = GridMap::empty(10, 10).unwrap();
    for m in 3..=4 {
        for seed in 0..3 {
            let graph = synthesize_random_costs(&grid, m, seed, 1, 10).unwrap();
            let (s, t) = (grid.lower_left(), grid.upper_right());
            let emoa = solve_costs(&graph, s, t, Algorithm::Emoa);
            assert!(!emoa.is_empty());
            assert_eq!(solve_costs(&graph, s, t, Algorithm::NamoaDr), emoa);
        }
    }
}

#[test]
fn lazy_variants_expand_the_same_labels() {
    let grid = GridMap::empty(8, 8).unwrap();
    let graph = synthesize_random_costs(&grid, 3, 11, 1, 10).unwrap();
    let (s, t) = (grid.lower_left(), grid.upper_right());
    let stats: Vec<_> = [
        Algorithm::Emoa,
        Algorithm::Toa,
        Algorithm::ExtBoa,
        Algorithm::ExtBoaLex,
    ]
    .into_iter()
    .map(|a| solve(&graph, s, t, &SolverConfig::new(a)).unwrap().stats)
    .collect();
    for st in &stats[1..] {
        assert_eq!(st.n_expanded, stats[0].n_expanded);
        assert_eq!(st.n_generated, stats[0].n_generated);
        assert_eq!(st.n_solutions, stats[0].n_solutions);
    }
}

#[test]
fn unreachable_target_has_no_solutions() {
    let mut graph = Graph::new(3, 3).unwrap();
    graph.add_arc(0, 1, &[1, 1, 1]).unwrap();
    for algorithm in algorithms(3) {
        let result = solve(&graph, 0, 2, &SolverConfig::new(algorithm)).unwrap();
        assert!(result.solutions.is_empty());
    }
}

#[test]
fn toa_rejects_four_objectives() {
    let graph = Graph::new(2, 4).unwrap();
    assert!(solve(&graph, 0, 1, &SolverConfig::new(Algorithm::Toa)).is_err());
}
