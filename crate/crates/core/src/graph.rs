use crate::error::{Error, Result};
use crate::vector::{vec_add, CostVector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arc {
    pub head: usize,
    pub cost: CostVector,
}

/// Directed graph with vector arc costs; vertices are `0..num_vertices`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    num_objectives: usize,
    adjacency: Vec<Vec<Arc>>,
    num_arcs: usize,
}

impl Graph {
    pub fn new(num_vertices: usize, num_objectives: usize) -> Result<Self> {
        if num_objectives == 0 {
            return Err(Error::InvalidInstance(
                "graph needs at least one objective".into(),
            ));
        }
        Ok(Graph {
            num_objectives,
            adjacency: vec![Vec::new(); num_vertices],
            num_arcs: 0,
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.adjacency.len()
    }

    pub fn num_arcs(&self) -> usize {
        self.num_arcs
    }

    pub fn num_objectives(&self) -> usize {
        self.num_objectives
    }

    pub fn add_arc(&mut self, tail: usize, head: usize, cost: &[u64]) -> Result<()> {
        self.check_vertex(tail)?;
        self.check_vertex(head)?;
        if cost.len() != self.num_objectives {
            return Err(Error::InvalidInstance(format!(
                "arc {tail}->{head} has {} cost components, expected {}",
                cost.len(),
                self.num_objectives
            )));
        }
        let cost = CostVector::edge(cost)?;
        self.adjacency[tail].push(Arc { head, cost });
        self.num_arcs += 1;
        Ok(())
    }

    /// Adds `u -> v` and `v -> u` sharing one cost vector.
    pub fn add_edge(&mut self, u: usize, v: usize, cost: &[u64]) -> Result<()> {
        self.add_arc(u, v, cost)?;
        self.add_arc(v, u, cost)
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.num_vertices() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v,
                num_vertices: self.num_vertices(),
            })
        }
    }

    pub fn successors(&self, v: usize) -> &[Arc] {
        &self.adjacency[v]
    }

    /// All arcs as `(tail, arc)` in tail order, then insertion order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, &Arc)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(tail, arcs)| arcs.iter().map(move |a| (tail, a)))
    }

    /// For each vertex, the `(tail, arc index)` pairs of its incoming arcs.
    pub fn reverse_adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut rev = vec![Vec::new(); self.num_vertices()];
        for (tail, arcs) in self.adjacency.iter().enumerate() {
            for (i, arc) in arcs.iter().enumerate() {
                rev[arc.head].push((tail, i));
            }
        }
        rev
    }

    /// Returns a copy with one extra objective computed per arc.
    pub fn with_extra_objective(&self, mut extra: impl FnMut(usize, &Arc) -> u64) -> Result<Graph> {
        let mut out = Graph::new(self.num_vertices(), self.num_objectives + 1)?;
        for (tail, arc) in self.arcs() {
            let mut cost = arc.cost.as_slice().to_vec();
            cost.push(extra(tail, arc));
            out.add_arc(tail, arc.head, &cost)?;
        }
        Ok(out)
    }
}

/// A start-to-destination path and its accumulated cost.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathResult {
    pub vertices: Vec<usize>,
    pub cost: CostVector,
}

impl PathResult {
    /// Does some choice of arcs along the vertex sequence add up to `cost`?
    /// Parallel arcs make the choice per step; partial sums above `cost`
    /// in any component are pruned.
    pub fn is_realized_by(&self, graph: &Graph) -> bool {
        if self.cost.dim() != graph.num_objectives() {
            return false;
        }
        fn walk(graph: &Graph, vertices: &[usize], sum: &CostVector, cost: &CostVector) -> bool {
            let [u, v, ..] = vertices else {
                return sum == cost;
            };
            graph
                .successors(*u)
                .iter()
                .filter(|a| a.head == *v)
                .any(|a| {
                    vec_add(sum, &a.cost).is_ok_and(|next| {
                        next.iter().zip(cost.iter()).all(|(x, y)| x <= y)
                            && walk(graph, &vertices[1..], &next, cost)
                    })
                })
        }
        !self.vertices.is_empty()
            && walk(
                graph,
                &self.vertices,
                &CostVector::zero(graph.num_objectives()),
                &self.cost,
            )
    }
}
