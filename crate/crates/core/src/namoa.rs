//! NAMOA*-dr: eager dominance checks at generation time.
//!
//! Per vertex there is an open set `G_op` (ids of live labels in OPEN) and a
//! closed set `G_cl` (projected g-vectors of expanded labels, lex-sorted
//! list). A new label is discarded if the solution set, `G_cl` or `G_op`
//! holds something `<=` it; otherwise the open labels it dominates are
//! tombstoned. Popped labels are not re-checked.
//!
//! Closed and solution comparisons use projected vectors: labels enter
//! `G_cl` in non-decreasing f1 order, so any closed label at a vertex has a
//! first component no larger than a later label there. Open labels carry no
//! such ordering and are compared on full vectors.

use std::time::Instant;

use crate::error::Result;
use crate::frontier::{NdList, OpCounter};
use crate::graph::Graph;
use crate::label::{LabelId, LabelPool};
use crate::search::{
    HeuristicTable, InvariantReport, OpenList, SearchResult, SearchStats, SolverConfig,
};
use crate::vector::{dominates, leq, vec_add, CostVector};

pub fn solve_namoa_dr(
    graph: &Graph,
    source: usize,
    target: usize,
    heuristics: &HeuristicTable,
    config: &SolverConfig,
) -> Result<SearchResult> {
    config.validate(graph.num_objectives())?;
    let n = graph.num_vertices();
    let start = Instant::now();

    let mut search = Namoa {
        graph,
        heuristics,
        target,
        labels: LabelPool::new(),
        alive: Vec::new(),
        open: OpenList::new(),
        open_sets: vec![Vec::new(); n],
        closed_sets: vec![None; n],
        solution_keys: NdList::new(true),
        counter: OpCounter::default(),
        stats: SearchStats::default(),
        report: config.verify.then(InvariantReport::default),
    };

    if let Some(h) = heuristics.get(source) {
        search.push(
            source,
            CostVector::zero(graph.num_objectives()),
            h.clone(),
            None,
        );
    }

    let mut solutions = Vec::new();
    let mut last_f1 = 0;
    while let Some(id) = search.open.pop() {
        if !search.alive[id] {
            continue;
        }
        if config
            .time_limit
            .is_some_and(|limit| start.elapsed() >= limit)
        {
            search.stats.timed_out = true;
            break;
        }
        search.stats.n_popped += 1;
        search.alive[id] = false;
        let label = search.labels.get(id);
        let (vertex, g) = (label.vertex, label.g.clone());
        if let Some(report) = &mut search.report {
            if label.f.first() < last_f1 {
                report.popped_f1 += 1;
            }
            last_f1 = label.f.first();
        }

        let open_set = &mut search.open_sets[vertex];
        let pos = open_set
            .iter()
            .position(|&o| o == id)
            .expect("live label is in its open set");
        open_set.swap_remove(pos);

        if vertex == target {
            search.solution_keys.update(g.tail(), &mut search.counter);
            solutions.push(id);
            continue;
        }
        search.closed_sets[vertex]
            .get_or_insert_with(|| NdList::new(true))
            .update(g.tail(), &mut search.counter);
        search.expand(id, &g)?;
    }

    search.stats.wall_time = start.elapsed();
    search.stats.n_dominance_checks = search.counter.dominance_checks;
    search.stats.n_solutions = solutions.len();
    Ok(SearchResult {
        labels: search.labels,
        solutions,
        stats: search.stats,
        invariants: search.report,
    })
}

struct Namoa<'a> {
    graph: &'a Graph,
    heuristics: &'a HeuristicTable,
    target: usize,
    labels: LabelPool,
    /// Tombstones: false once popped or eagerly pruned.
    alive: Vec<bool>,
    open: OpenList,
    open_sets: Vec<Vec<LabelId>>,
    closed_sets: Vec<Option<NdList>>,
    solution_keys: NdList,
    counter: OpCounter,
    stats: SearchStats,
    report: Option<InvariantReport>,
}

impl Namoa<'_> {
    fn push(&mut self, vertex: usize, g: CostVector, f: CostVector, parent: Option<LabelId>) {
        let id = self.labels.push(vertex, g, f.clone(), parent);
        self.alive.push(true);
        self.open_sets[vertex].push(id);
        self.open.push(id, f);
    }

    fn expand(&mut self, id: LabelId, g: &CostVector) -> Result<()> {
        self.stats.n_expanded += 1;
        let vertex = self.labels.get(id).vertex;
        let parent_f1 = self.labels.get(id).f.first();
        for arc in self.graph.successors(vertex) {
            let head = arc.head;
            let Some(h) = self.heuristics.get(head) else {
                continue;
            };
            self.stats.n_generated += 1;
            let g2 = vec_add(g, &arc.cost)?;
            let f2 = vec_add(&g2, h)?;
            if let Some(report) = &mut self.report {
                if f2.first() < parent_f1 {
                    report.successor_f1 += 1;
                }
            }
            if self.solution_keys.check(f2.tail(), &mut self.counter) {
                continue;
            }
            if head != self.target {
                if let Some(closed) = &self.closed_sets[head] {
                    if closed.check(g2.tail(), &mut self.counter) {
                        continue;
                    }
                }
            }
            if !self.prune_open(head, &g2) {
                continue;
            }
            self.push(head, g2, f2, Some(id));
            if self.report.is_some() {
                self.audit_open_set(head);
            }
        }
        Ok(())
    }

    /// Returns false if an open label at `vertex` is `<= g`; otherwise
    /// tombstones the open labels `g` dominates and returns true.
    fn prune_open(&mut self, vertex: usize, g: &CostVector) -> bool {
        let mut dominated = Vec::new();
        for (i, &other) in self.open_sets[vertex].iter().enumerate() {
            let other_g = &self.labels.get(other).g;
            self.counter.dominance_checks += 1;
            if leq(other_g, g) {
                // the open set is pairwise non-dominated, so nothing was marked
                debug_assert!(dominated.is_empty());
                return false;
            }
            self.counter.dominance_checks += 1;
            if dominates(g, other_g) {
                dominated.push(i);
            }
        }
        for &i in dominated.iter().rev() {
            let removed = self.open_sets[vertex].swap_remove(i);
            self.alive[removed] = false;
        }
        true
    }

    fn audit_open_set(&mut self, vertex: usize) {
        let set = &self.open_sets[vertex];
        let mut violations = 0;
        for (i, &a) in set.iter().enumerate() {
            for &b in &set[i + 1..] {
                let (ga, gb) = (&self.labels.get(a).g, &self.labels.get(b).g);
                if leq(ga, gb) || leq(gb, ga) {
                    violations += 1;
                }
            }
        }
        if let Some(report) = &mut self.report {
            report.eager += violations;
            report.max_frontier_len = report.max_frontier_len.max(set.len());
        }
    }
}

#[cfg(test)]
mod tests {
    use crate::search::{solve, Algorithm, SolverConfig};
    use crate::{CostVector, Graph};

    fn diamond() -> Graph {
        let mut g = Graph::new(4, 2).unwrap();
        g.add_arc(0, 1, &[1, 9]).unwrap();
        g.add_arc(0, 2, &[9, 1]).unwrap();
        g.add_arc(1, 3, &[1, 9]).unwrap();
        g.add_arc(2, 3, &[9, 1]).unwrap();
        g
    }

    #[test]
    fn source_equals_target() {
        let r = solve(&diamond(), 2, 2, &SolverConfig::new(Algorithm::NamoaDr)).unwrap();
        assert_eq!(r.costs(), vec![CostVector::zero(2)]);
    }

    #[test]
    fn diamond_matches_lazy_search() {
        let config = SolverConfig::new(Algorithm::NamoaDr).verifying();
        let r = solve(&diamond(), 0, 3, &config).unwrap();
        let lazy = solve(&diamond(), 0, 3, &SolverConfig::new(Algorithm::Emoa)).unwrap();
        assert_eq!(
            r.costs(),
            vec![CostVector::new([2, 18]), CostVector::new([18, 2])]
        );
        assert_eq!(r.costs(), lazy.costs());
        assert_eq!(r.invariants.unwrap().total_violations(), 0);
    }

    #[test]
    fn dominated_open_label_is_pruned() {
        // two routes into vertex 2; the second is strictly better and is
        // generated while the first still waits in OPEN
        let mut g = Graph::new(4, 2).unwrap();
        g.add_arc(0, 2, &[4, 4]).unwrap();
        g.add_arc(0, 1, &[1, 1]).unwrap();
        g.add_arc(1, 2, &[1, 1]).unwrap();
        g.add_arc(2, 3, &[10, 10]).unwrap();
        let r = solve(&g, 0, 3, &SolverConfig::new(Algorithm::NamoaDr)).unwrap();
        assert_eq!(r.costs(), vec![CostVector::new([12, 12])]);
        // 0, 1, then only the cheaper label at 2
        assert_eq!(r.stats.n_expanded, 3);
    }
}
