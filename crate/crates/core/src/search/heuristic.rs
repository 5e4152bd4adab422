use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::Result;
use crate::graph::Graph;
use crate::vector::{leq, vec_add, CostVector};

/// Per-vertex lower bounds on the remaining cost to the destination.
/// `None` marks vertices that cannot reach it.
#[derive(Clone, Debug)]
pub struct HeuristicTable {
    values: Vec<Option<CostVector>>,
}

impl HeuristicTable {
    pub fn get(&self, v: usize) -> Option<&CostVector> {
        self.values[v].as_ref()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `h(u) <= c(u,v) + h(v)` on every arc whose head reaches the target.
    pub fn is_consistent(&self, graph: &Graph) -> bool {
        graph
            .arcs()
            .all(|(tail, arc)| match (self.get(tail), self.get(arc.head)) {
                (Some(hu), Some(hv)) => vec_add(&arc.cost, hv).is_ok_and(|rhs| leq(hu, &rhs)),
                (_, None) => true,
                (None, Some(_)) => false,
            })
    }
}

/// One backward Dijkstra per objective from `target`.
pub fn compute_heuristics(graph: &Graph, target: usize) -> Result<HeuristicTable> {
    graph.check_vertex(target)?;
    let n = graph.num_vertices();
    let reverse = graph.reverse_adjacency();
    let mut per_objective = Vec::with_capacity(graph.num_objectives());
    for m in 0..graph.num_objectives() {
        let mut dist = vec![u64::MAX; n];
        let mut heap = BinaryHeap::new();
        dist[target] = 0;
        heap.push(Reverse((0u64, target)));
        while let Some(Reverse((d, v))) = heap.pop() {
            if d > dist[v] {
                continue;
            }
            for &(tail, idx) in &reverse[v] {
                let nd = d + graph.successors(tail)[idx].cost[m];
                if nd < dist[tail] {
                    dist[tail] = nd;
                    heap.push(Reverse((nd, tail)));
                }
            }
        }
        per_objective.push(dist);
    }
    let values = (0..n)
        .map(|v| {
            if per_objective[0][v] == u64::MAX {
                None
            } else {
                Some(CostVector::new(per_objective.iter().map(|d| d[v])))
            }
        })
        .collect();
    Ok(HeuristicTable { values })
}
