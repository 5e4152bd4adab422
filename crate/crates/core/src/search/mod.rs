//! The lazy-check search framework.
//!
//! Each iteration pops the label with the lexicographically smallest f,
//! discards it if the frontier at its vertex or the solution frontier
//! already holds a projected vector `<=` its own, and otherwise records it
//! and expands it. Successors get the same two checks before they are pushed.
//! All comparisons use projected vectors (first objective dropped).

mod heuristic;
mod open;

pub use heuristic::{compute_heuristics, HeuristicTable};
pub use open::OpenList;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::frontier::{Backend, Frontier, OpCounter};
use crate::graph::{Graph, PathResult};
use crate::label::{LabelId, LabelPool};
use crate::vector::{leq, vec_add, CostVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Emoa,
    Toa,
    ExtBoa,
    ExtBoaLex,
    NamoaDr,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::Emoa,
        Algorithm::Toa,
        Algorithm::ExtBoa,
        Algorithm::ExtBoaLex,
        Algorithm::NamoaDr,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Emoa => "emoa",
            Algorithm::Toa => "toa",
            Algorithm::ExtBoa => "ext-boa",
            Algorithm::ExtBoaLex => "ext-boa-lex",
            Algorithm::NamoaDr => "namoa-dr",
        }
    }

    pub fn supports(self, num_objectives: usize) -> bool {
        match self {
            Algorithm::Toa => num_objectives == 3,
            _ => num_objectives >= 2,
        }
    }

    /// Frontier structure used by the lazy-check framework.
    pub fn backend(self, num_objectives: usize) -> Option<Backend> {
        match self {
            Algorithm::Emoa if num_objectives == 2 => Some(Backend::Scalar),
            Algorithm::Emoa => Some(Backend::Tree),
            Algorithm::Toa => Some(Backend::Tree2d),
            Algorithm::ExtBoa => Some(Backend::List),
            Algorithm::ExtBoaLex => Some(Backend::SortedList),
            Algorithm::NamoaDr => None,
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace(['_', '*'], "-");
        let key = key.trim_end_matches('-');
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == key)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown algorithm '{s}'")))
    }
}

#[derive(Clone, Debug)]
pub struct SolverConfig {
    pub algorithm: Algorithm,
    pub time_limit: Option<Duration>,
    /// Record invariant violations (f1 monotonicity, projection equivalence,
    /// frontier sizes). Adds work that is not counted as dominance checks.
    pub verify: bool,
}

impl SolverConfig {
    pub fn new(algorithm: Algorithm) -> Self {
        SolverConfig {
            algorithm,
            time_limit: None,
            verify: false,
        }
    }

    pub fn with_time_limit(mut self, limit: Duration) -> Self {
        self.time_limit = Some(limit);
        self
    }

    pub fn verifying(mut self) -> Self {
        self.verify = true;
        self
    }

    pub fn validate(&self, num_objectives: usize) -> Result<()> {
        if self.algorithm.supports(num_objectives) {
            Ok(())
        } else {
            Err(Error::InvalidConfig(format!(
                "{} does not support {num_objectives} objectives",
                self.algorithm
            )))
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub n_popped: u64,
    pub n_expanded: u64,
    pub n_generated: u64,
    pub n_dominance_checks: u64,
    pub n_solutions: usize,
    /// Search time, excluding heuristic computation.
    pub wall_time: Duration,
    pub heuristic_time: Duration,
    pub timed_out: bool,
}

/// Violation counts gathered in verify mode.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InvariantReport {
    /// A successor with smaller f1 than its parent.
    pub successor_f1: u64,
    /// A popped label with smaller f1 than an earlier popped label.
    pub popped_f1: u64,
    /// A retained label with smaller f1 or g1 than an earlier one at its vertex.
    pub vertex_f1_g1: u64,
    /// Full and projected `<=` disagreeing at pop time.
    pub projection: u64,
    /// NAMOA*-dr only: same-vertex open labels dominating each other.
    pub eager: u64,
    /// Largest frontier size observed.
    pub max_frontier_len: usize,
}

impl InvariantReport {
    pub fn total_violations(&self) -> u64 {
        self.successor_f1 + self.popped_f1 + self.vertex_f1_g1 + self.projection + self.eager
    }
}

#[derive(Debug)]
pub struct SearchResult {
    pub labels: LabelPool,
    /// Labels that reached the destination, in discovery order.
    pub solutions: Vec<LabelId>,
    pub stats: SearchStats,
    pub invariants: Option<InvariantReport>,
}

impl SearchResult {
    /// Solution costs, sorted lexicographically.
    pub fn costs(&self) -> Vec<CostVector> {
        let mut costs: Vec<CostVector> = self
            .solutions
            .iter()
            .map(|&id| self.labels.get(id).g.clone())
            .collect();
        costs.sort();
        costs
    }

    pub fn paths(&self) -> Result<Vec<PathResult>> {
        self.solutions
            .iter()
            .map(|&id| self.labels.reconstruct_path(id))
            .collect()
    }
}

/// Per-vertex frontiers of projected g-vectors, created on first touch.
/// The destination's frontier doubles as the solution frontier.
#[derive(Clone, Debug)]
pub struct FrontierMap {
    prototype: Frontier,
    frontiers: Vec<Option<Frontier>>,
    target: usize,
}

impl FrontierMap {
    pub fn new(
        backend: Backend,
        num_vertices: usize,
        num_objectives: usize,
        target: usize,
    ) -> Result<Self> {
        if num_objectives < 2 {
            return Err(Error::InvalidInstance(format!(
                "search needs at least 2 objectives, got {num_objectives}"
            )));
        }
        Ok(FrontierMap {
            prototype: Frontier::new(backend, num_objectives - 1)?,
            frontiers: vec![None; num_vertices],
            target,
        })
    }

    pub fn frontier(&self, v: usize) -> Option<&Frontier> {
        self.frontiers[v].as_ref()
    }

    /// Is `p(g)` dominated by (or equal to) a key at `vertex`?
    #[inline]
    pub fn frontier_check(&self, vertex: usize, g: &CostVector, counter: &mut OpCounter) -> bool {
        self.frontiers[vertex]
            .as_ref()
            .is_some_and(|fr| fr.check(g.tail(), counter))
    }

    /// Is `p(f)` dominated by (or equal to) a solution key?
    #[inline]
    pub fn solution_check(&self, f: &CostVector, counter: &mut OpCounter) -> bool {
        self.frontier_check(self.target, f, counter)
    }

    /// Adds `p(g)` at `vertex`, dropping keys it dominates. Returns the new
    /// frontier size.
    pub fn update_frontier(
        &mut self,
        vertex: usize,
        g: &CostVector,
        counter: &mut OpCounter,
    ) -> usize {
        let fr = self.frontiers[vertex].get_or_insert_with(|| self.prototype.clone());
        fr.update(g.tail(), counter);
        fr.len()
    }
}

/// Computes heuristics, then runs the configured algorithm.
pub fn solve(
    graph: &Graph,
    source: usize,
    target: usize,
    config: &SolverConfig,
) -> Result<SearchResult> {
    graph.check_vertex(source)?;
    graph.check_vertex(target)?;
    config.validate(graph.num_objectives())?;
    let start = Instant::now();
    let heuristics = compute_heuristics(graph, target)?;
    let heuristic_time = start.elapsed();
    let mut result = solve_with_heuristics(graph, source, target, &heuristics, config)?;
    result.stats.heuristic_time = heuristic_time;
    Ok(result)
}

pub fn solve_with_heuristics(
    graph: &Graph,
    source: usize,
    target: usize,
    heuristics: &HeuristicTable,
    config: &SolverConfig,
) -> Result<SearchResult> {
    graph.check_vertex(source)?;
    graph.check_vertex(target)?;
    config.validate(graph.num_objectives())?;
    match config.algorithm.backend(graph.num_objectives()) {
        Some(backend) => LazySearch::new(graph, target, heuristics, backend, config)?.run(source),
        None => crate::namoa::solve_namoa_dr(graph, source, target, heuristics, config),
    }
}

/// Bookkeeping for the verify-mode invariant checks.
struct Audit {
    report: InvariantReport,
    last_popped_f1: u64,
    last_retained: Vec<Option<(u64, u64)>>,
    retained: Vec<Vec<LabelId>>,
}

impl Audit {
    fn new(num_vertices: usize) -> Self {
        Audit {
            report: InvariantReport::default(),
            last_popped_f1: 0,
            last_retained: vec![None; num_vertices],
            retained: vec![Vec::new(); num_vertices],
        }
    }

    fn on_pop(&mut self, labels: &LabelPool, id: LabelId) {
        let l = labels.get(id);
        if l.f.first() < self.last_popped_f1 {
            self.report.popped_f1 += 1;
        }
        self.last_popped_f1 = l.f.first();
        for &other in &self.retained[l.vertex] {
            let g = &labels.get(other).g;
            if leq(g, &l.g) != leq(g.tail(), l.g.tail()) {
                self.report.projection += 1;
            }
        }
    }

    fn on_retain(&mut self, labels: &LabelPool, id: LabelId, frontier_len: usize) {
        let l = labels.get(id);
        let key = (l.f.first(), l.g.first());
        if let Some((f1, g1)) = self.last_retained[l.vertex] {
            if key.0 < f1 || key.1 < g1 {
                self.report.vertex_f1_g1 += 1;
            }
        }
        self.last_retained[l.vertex] = Some(key);
        self.retained[l.vertex].push(id);
        self.report.max_frontier_len = self.report.max_frontier_len.max(frontier_len);
    }
}

struct LazySearch<'a> {
    graph: &'a Graph,
    heuristics: &'a HeuristicTable,
    target: usize,
    time_limit: Option<Duration>,
    frontiers: FrontierMap,
    labels: LabelPool,
    open: OpenList,
    counter: OpCounter,
    stats: SearchStats,
    audit: Option<Audit>,
}

impl<'a> LazySearch<'a> {
    fn new(
        graph: &'a Graph,
        target: usize,
        heuristics: &'a HeuristicTable,
        backend: Backend,
        config: &SolverConfig,
    ) -> Result<Self> {
        let n = graph.num_vertices();
        Ok(LazySearch {
            graph,
            heuristics,
            target,
            time_limit: config.time_limit,
            frontiers: FrontierMap::new(backend, n, graph.num_objectives(), target)?,
            labels: LabelPool::new(),
            open: OpenList::new(),
            counter: OpCounter::default(),
            stats: SearchStats::default(),
            audit: config.verify.then(|| Audit::new(n)),
        })
    }

    fn run(mut self, source: usize) -> Result<SearchResult> {
        let start = Instant::now();
        let mut solutions = Vec::new();
        if let Some(h) = self.heuristics.get(source) {
            let g = CostVector::zero(self.graph.num_objectives());
            let f = h.clone();
            let id = self.labels.push(source, g, f.clone(), None);
            self.open.push(id, f);
        }

        while let Some(id) = self.open.pop() {
            if self
                .time_limit
                .is_some_and(|limit| start.elapsed() >= limit)
            {
                self.stats.timed_out = true;
                break;
            }
            self.stats.n_popped += 1;
            if let Some(audit) = &mut self.audit {
                audit.on_pop(&self.labels, id);
            }
            let label = self.labels.get(id);
            let vertex = label.vertex;
            if self
                .frontiers
                .frontier_check(vertex, &label.g, &mut self.counter)
                || self.frontiers.solution_check(&label.f, &mut self.counter)
            {
                continue;
            }
            let size = self
                .frontiers
                .update_frontier(vertex, &label.g, &mut self.counter);
            if let Some(audit) = &mut self.audit {
                audit.on_retain(&self.labels, id, size);
            }
            if vertex == self.target {
                solutions.push(id);
                continue;
            }
            self.expand(id)?;
        }

        self.stats.wall_time = start.elapsed();
        self.stats.n_dominance_checks = self.counter.dominance_checks;
        self.stats.n_solutions = solutions.len();
        Ok(SearchResult {
            labels: self.labels,
            solutions,
            stats: self.stats,
            invariants: self.audit.map(|a| a.report),
        })
    }

    fn expand(&mut self, id: LabelId) -> Result<()> {
        self.stats.n_expanded += 1;
        let label = self.labels.get(id);
        let (vertex, g) = (label.vertex, label.g.clone());
        let parent_f1 = label.f.first();
        for arc in self.graph.successors(vertex) {
            let Some(h) = self.heuristics.get(arc.head) else {
                continue;
            };
            self.stats.n_generated += 1;
            let g2 = vec_add(&g, &arc.cost)?;
            let f2 = vec_add(&g2, h)?;
            if let Some(audit) = &mut self.audit {
                if f2.first() < parent_f1 {
                    audit.report.successor_f1 += 1;
                }
            }
            if self
                .frontiers
                .frontier_check(arc.head, &g2, &mut self.counter)
                || self.frontiers.solution_check(&f2, &mut self.counter)
            {
                continue;
            }
            let child = self.labels.push(arc.head, g2, f2.clone(), Some(id));
            self.open.push(child, f2);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diamond() -> Graph {
        let mut g = Graph::new(4, 2).unwrap();
        g.add_arc(0, 1, &[1, 9]).unwrap();
        g.add_arc(0, 2, &[9, 1]).unwrap();
        g.add_arc(1, 3, &[1, 9]).unwrap();
        g.add_arc(2, 3, &[9, 1]).unwrap();
        g
    }

    fn all_lazy(m: usize) -> Vec<Algorithm> {
        [
            Algorithm::Emoa,
            Algorithm::Toa,
            Algorithm::ExtBoa,
            Algorithm::ExtBoaLex,
        ]
        .into_iter()
        .filter(|a| a.supports(m))
        .collect()
    }

    #[test]
    fn algorithm_names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert_eq!("EMOA*".parse::<Algorithm>().unwrap(), Algorithm::Emoa);
        assert_eq!(
            "ext_boa_lex".parse::<Algorithm>().unwrap(),
            Algorithm::ExtBoaLex
        );
        assert!("dijkstra".parse::<Algorithm>().is_err());
    }

    #[test]
    fn toa_requires_three_objectives() {
        let err = solve(&diamond(), 0, 3, &SolverConfig::new(Algorithm::Toa)).unwrap_err();
        assert!(matches!(err, Error::InvalidConfig(_)));
    }

    #[test]
    fn source_equals_target() {
        let g = diamond();
        for algo in all_lazy(2) {
            let r = solve(&g, 3, 3, &SolverConfig::new(algo)).unwrap();
            assert_eq!(r.costs(), vec![CostVector::zero(2)]);
            assert_eq!(r.stats.n_expanded, 0);
            let paths = r.paths().unwrap();
            assert_eq!(paths[0].vertices, vec![3]);
        }
    }

    #[test]
    fn diamond_has_two_solutions() {
        let g = diamond();
        for algo in all_lazy(2) {
            let r = solve(&g, 0, 3, &SolverConfig::new(algo).verifying()).unwrap();
            assert_eq!(
                r.costs(),
                vec![CostVector::new([2, 18]), CostVector::new([18, 2])]
            );
            assert_eq!(r.stats.n_solutions, 2);
            let mut paths = r.paths().unwrap();
            paths.sort_by(|a, b| a.cost.cmp(&b.cost));
            assert_eq!(paths[0].vertices, vec![0, 1, 3]);
            assert_eq!(paths[1].vertices, vec![0, 2, 3]);
            for p in &paths {
                assert!(p.is_realized_by(&g));
            }
            assert_eq!(r.invariants.unwrap().total_violations(), 0);
        }
    }

    #[test]
    fn unreachable_target_gives_empty_set() {
        let mut g = Graph::new(3, 3).unwrap();
        g.add_arc(0, 1, &[1, 1, 1]).unwrap();
        for algo in all_lazy(3) {
            let r = solve(&g, 0, 2, &SolverConfig::new(algo)).unwrap();
            assert!(r.solutions.is_empty());
            assert!(!r.stats.timed_out);
        }
    }

    #[test]
    fn dead_end_vertex_is_not_expanded_further() {
        // 1 has no outgoing arcs and cannot reach the target
        let mut g = Graph::new(3, 2).unwrap();
        g.add_arc(0, 1, &[1, 1]).unwrap();
        g.add_arc(0, 2, &[5, 5]).unwrap();
        let r = solve(&g, 0, 2, &SolverConfig::new(Algorithm::Emoa)).unwrap();
        assert_eq!(r.stats.n_generated, 1);
        assert_eq!(r.labels.len(), 2);
    }

    #[test]
    fn frontier_map_checks() {
        let mut map = FrontierMap::new(Backend::Tree, 2, 4, 1).unwrap();
        let mut c = OpCounter::default();
        let retained = [
            [0, 7, 9, 9],
            [0, 9, 9, 7],
            [0, 9, 10, 5],
            [0, 10, 4, 10],
            [0, 12, 9, 4],
        ];
        assert!(!map.frontier_check(0, &CostVector::new([13, 9, 9, 9]), &mut c));
        for g in retained {
            map.update_frontier(0, &CostVector::new(g), &mut c);
        }
        assert!(map.frontier_check(0, &CostVector::new([13, 9, 9, 9]), &mut c));
        // equality counts
        assert!(map.frontier_check(0, &CostVector::new([3, 9, 10, 5]), &mut c));

        assert!(!map.solution_check(&CostVector::new([6, 6, 6, 6]), &mut c));
        map.update_frontier(1, &CostVector::new([5, 5, 5, 5]), &mut c);
        assert!(map.solution_check(&CostVector::new([6, 6, 6, 6]), &mut c));
    }

    #[test]
    fn update_frontier_sizes() {
        let mut map = FrontierMap::new(Backend::Tree, 1, 3, 0).unwrap();
        let mut c = OpCounter::default();
        assert_eq!(
            map.update_frontier(0, &CostVector::new([0, 3, 7]), &mut c),
            1
        );
        assert_eq!(
            map.update_frontier(0, &CostVector::new([0, 5, 5]), &mut c),
            2
        );
        assert_eq!(
            map.update_frontier(0, &CostVector::new([0, 7, 3]), &mut c),
            3
        );
        // (4,4) replaces (5,5)
        assert_eq!(
            map.update_frontier(0, &CostVector::new([1, 4, 4]), &mut c),
            3
        );
        // (4,3) dominates (4,4) and (7,3): net -1
        assert_eq!(
            map.update_frontier(0, &CostVector::new([1, 4, 3]), &mut c),
            2
        );

        let mut scalar = FrontierMap::new(Backend::Scalar, 1, 2, 0).unwrap();
        for g in [[0, 9], [1, 7], [2, 3]] {
            assert_eq!(scalar.update_frontier(0, &CostVector::new(g), &mut c), 1);
        }
    }

    #[test]
    fn timeout_returns_partial_result() {
        let mut g = Graph::new(2, 2).unwrap();
        g.add_arc(0, 1, &[1, 1]).unwrap();
        let config = SolverConfig::new(Algorithm::Emoa).with_time_limit(Duration::ZERO);
        let r = solve(&g, 0, 1, &config).unwrap();
        assert!(r.stats.timed_out);
        assert!(r.solutions.is_empty());
    }

    #[test]
    fn wide_costs_accumulate_in_64_bits() {
        let mut g = Graph::new(3, 2).unwrap();
        let big = u64::from(u32::MAX);
        g.add_arc(0, 1, &[big, 0]).unwrap();
        g.add_arc(1, 2, &[big, 0]).unwrap();
        // accumulation fits in 64 bits
        assert!(solve(&g, 0, 2, &SolverConfig::new(Algorithm::Emoa)).is_ok());
    }
}
