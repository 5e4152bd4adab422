//! Reference answers for testing the solvers.
//!
//! [`nd_subset`] extracts the non-dominated subset of a vector set (Kung's
//! sort-and-divide method up to three dimensions, a pairwise scan above).
//! [`brute_force_pareto`] enumerates the Pareto front of a small graph with
//! a heuristic-free label-correcting search on full cost vectors.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{Graph, PathResult};
use crate::label::LabelPool;
use crate::vector::{dominates, leq, vec_add, CostVector};

/// Non-dominated subset with duplicates collapsed, sorted lexicographically.
pub fn nd_subset<V: AsRef<[u64]>>(set: &[V]) -> Vec<Vec<u64>> {
    let mut sorted: Vec<Vec<u64>> = set.iter().map(|v| v.as_ref().to_vec()).collect();
    if let Some(first) = sorted.first() {
        let dim = first.len();
        assert!(sorted.iter().all(|v| v.len() == dim), "mixed dimensions");
    }
    sorted.sort();
    sorted.dedup();
    match sorted.first().map(Vec::len) {
        None => sorted,
        Some(dim) if dim <= 3 => kung(&sorted),
        Some(_) => pairwise(&sorted),
    }
}

// `sorted` is strictly increasing lexicographically, so nothing in the upper
// half can dominate anything in the lower half.
fn kung(sorted: &[Vec<u64>]) -> Vec<Vec<u64>> {
    if sorted.len() <= 1 {
        return sorted.to_vec();
    }
    let (lower, upper) = sorted.split_at(sorted.len() / 2);
    let mut front = kung(lower);
    let kept: Vec<Vec<u64>> = kung(upper)
        .into_iter()
        .filter(|b| !front.iter().any(|a| dominates(a, b)))
        .collect();
    front.extend(kept);
    front
}

fn pairwise(distinct: &[Vec<u64>]) -> Vec<Vec<u64>> {
    distinct
        .iter()
        .filter(|b| !distinct.iter().any(|a| dominates(a, b)))
        .cloned()
        .collect()
}

/// Exact cost-unique Pareto front from `source` to `target`, one witness
/// path per cost vector, sorted by cost.
///
/// Fails with [`Error::OracleInfeasible`] once more than `label_budget`
/// labels have been created.
pub fn brute_force_pareto(
    graph: &Graph,
    source: usize,
    target: usize,
    label_budget: usize,
) -> Result<Vec<PathResult>> {
    graph.check_vertex(source)?;
    graph.check_vertex(target)?;
    let zero = CostVector::zero(graph.num_objectives());
    let mut pool = LabelPool::new();
    let mut alive = vec![true];
    let mut at_vertex = vec![Vec::new(); graph.num_vertices()];
    let root = pool.push(source, zero.clone(), zero, None);
    at_vertex[source].push(root);
    let mut queue = VecDeque::from([root]);

    while let Some(id) = queue.pop_front() {
        if !alive[id] {
            continue;
        }
        let (vertex, g) = {
            let l = pool.get(id);
            (l.vertex, l.g.clone())
        };
        for arc in graph.successors(vertex) {
            let cost = vec_add(&g, &arc.cost)?;
            let existing = &mut at_vertex[arc.head];
            if existing.iter().any(|&o| leq(&pool.get(o).g, &cost)) {
                continue;
            }
            existing.retain(|&o| {
                let keep = !dominates(&cost, &pool.get(o).g);
                if !keep {
                    alive[o] = false;
                }
                keep
            });
            if pool.len() >= label_budget {
                return Err(Error::OracleInfeasible {
                    budget: label_budget,
                });
            }
            let child = pool.push(arc.head, cost.clone(), cost, Some(id));
            alive.push(true);
            existing.push(child);
            queue.push_back(child);
        }
    }

    let mut front = at_vertex[target]
        .iter()
        .map(|&id| pool.reconstruct_path(id))
        .collect::<Result<Vec<_>>>()?;
    front.sort_by(|a, b| a.cost.cmp(&b.cost));
    Ok(front)
}
