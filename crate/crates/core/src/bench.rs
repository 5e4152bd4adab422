//! Batch runs, run summaries and oracle verification.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Duration;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::io::{GraphFactory, Instance, InstanceFile, ResultRecord};
use crate::oracle::brute_force_pareto;
use crate::search::{solve, Algorithm, SearchResult, SolverConfig};
use crate::vector::CostVector;

/// Per-run wall-clock cap.
pub const DEFAULT_TIME_LIMIT: Duration = Duration::from_secs(600);

/// Overrides the number of batch worker threads.
pub const WORKERS_ENV: &str = "EMOA_WORKERS";

#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    pub time_limit: Option<Duration>,
    /// When false, timing columns are written as zero.
    pub timing: bool,
    pub verify: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            time_limit: Some(DEFAULT_TIME_LIMIT),
            timing: true,
            verify: false,
        }
    }
}

impl RunOptions {
    fn config(&self, algorithm: Algorithm) -> SolverConfig {
        let mut config = SolverConfig::new(algorithm);
        config.time_limit = self.time_limit;
        config.verify = self.verify;
        config
    }
}

pub fn record(
    inst: &Instance,
    algorithm: Algorithm,
    result: &SearchResult,
    timing: bool,
) -> ResultRecord {
    let s = &result.stats;
    ResultRecord {
        instance: inst.id,
        algo: algorithm.name().to_string(),
        m: inst.num_objectives,
        runtime_ms: if timing {
            s.wall_time.as_secs_f64() * 1e3
        } else {
            0.0
        },
        n_solutions: s.n_solutions as u64,
        n_expanded: s.n_expanded,
        n_generated: s.n_generated,
        n_dominance_checks: s.n_dominance_checks,
        timed_out: s.timed_out,
    }
}

pub fn run_instance(
    graph: &Graph,
    inst: &Instance,
    algorithm: Algorithm,
    opts: &RunOptions,
) -> Result<(ResultRecord, SearchResult)> {
    let result = solve(graph, inst.source, inst.target, &opts.config(algorithm))?;
    Ok((record(inst, algorithm, &result, opts.timing), result))
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunFailure {
    pub instance: usize,
    pub algo: String,
    pub message: String,
}

#[derive(Clone, Debug, Default)]
pub struct BatchOutput {
    /// Sorted by `(instance, algo)`.
    pub records: Vec<ResultRecord>,
    pub failures: Vec<RunFailure>,
}

pub fn worker_count() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        })
}

/// Runs every `(instance, algorithm)` pair; algorithms that do not support
/// an instance's M are skipped when `skip_unsupported` is set and reported
/// as failures otherwise.
pub fn run_batch(
    file: &InstanceFile,
    factory: &GraphFactory,
    algorithms: &[Algorithm],
    opts: &RunOptions,
    skip_unsupported: bool,
    workers: usize,
) -> BatchOutput {
    let next = AtomicUsize::new(0);
    let output = Mutex::new(BatchOutput::default());
    let workers = workers.clamp(1, file.instances.len().max(1));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(inst) = file.instances.get(i) else {
                    break;
                };
                let (records, failures) =
                    run_all(inst, factory, algorithms, opts, skip_unsupported);
                let mut out = output.lock().unwrap_or_else(|e| e.into_inner());
                out.records.extend(records);
                out.failures.extend(failures);
            });
        }
    });
    let mut out = output.into_inner().unwrap_or_else(|e| e.into_inner());
    out.records
        .sort_by(|a, b| (a.instance, &a.algo).cmp(&(b.instance, &b.algo)));
    out.failures
        .sort_by(|a, b| (a.instance, &a.algo).cmp(&(b.instance, &b.algo)));
    out
}

fn run_all(
    inst: &Instance,
    factory: &GraphFactory,
    algorithms: &[Algorithm],
    opts: &RunOptions,
    skip_unsupported: bool,
) -> (Vec<ResultRecord>, Vec<RunFailure>) {
    let mut records = Vec::new();
    let mut failures = Vec::new();
    let fail = |algo: &str, e: &Error| RunFailure {
        instance: inst.id,
        algo: algo.to_string(),
        message: e.to_string(),
    };
    let graph = match factory.build(inst) {
        Ok(g) => g,
        Err(e) => {
            failures.extend(algorithms.iter().map(|a| fail(a.name(), &e)));
            return (records, failures);
        }
    };
    for &algorithm in algorithms {
        if skip_unsupported && !algorithm.supports(inst.num_objectives) {
            continue;
        }
        match run_instance(&graph, inst, algorithm, opts) {
            Ok((rec, _)) => records.push(rec),
            Err(e) => failures.push(fail(algorithm.name(), &e)),
        }
    }
    (records, failures)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SummaryRow {
    pub algo: String,
    pub succeeded: usize,
    pub total: usize,
    /// Mean, median and maximum runtime in seconds over the common instances.
    pub mean_s: f64,
    pub median_s: f64,
    pub max_s: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Summary {
    pub rows: Vec<SummaryRow>,
    /// Instances solved within the cap by every algorithm.
    pub common: usize,
}

pub fn summarize(records: &[ResultRecord]) -> Summary {
    let mut by_algo: BTreeMap<(usize, String), Vec<&ResultRecord>> = BTreeMap::new();
    for r in records {
        let rank = Algorithm::ALL
            .iter()
            .position(|a| a.name() == r.algo)
            .unwrap_or(usize::MAX);
        by_algo.entry((rank, r.algo.clone())).or_default().push(r);
    }
    let mut common: Option<BTreeSet<usize>> = None;
    for runs in by_algo.values() {
        let solved: BTreeSet<usize> = runs
            .iter()
            .filter(|r| !r.timed_out)
            .map(|r| r.instance)
            .collect();
        common = Some(match common {
            None => solved,
            Some(c) => c.intersection(&solved).copied().collect(),
        });
    }
    let common = common.unwrap_or_default();
    let rows = by_algo
        .into_iter()
        .map(|((_, algo), runs)| {
            let mut times: Vec<f64> = runs
                .iter()
                .filter(|r| common.contains(&r.instance))
                .map(|r| r.runtime_ms / 1e3)
                .collect();
            times.sort_by(f64::total_cmp);
            let (mean_s, median_s, max_s) = if times.is_empty() {
                (0.0, 0.0, 0.0)
            } else {
                (
                    times.iter().sum::<f64>() / times.len() as f64,
                    median(&times),
                    *times.last().expect("non-empty"),
                )
            };
            SummaryRow {
                algo,
                succeeded: runs.iter().filter(|r| !r.timed_out).count(),
                total: runs.len(),
                mean_s,
                median_s,
                max_s,
            }
        })
        .collect();
    Summary {
        rows,
        common: common.len(),
    }
}

/// Median of sorted values.
pub fn median(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<14} {:<12} (*) Mean/Median/Max RT (s)",
            "", "Success/All"
        )?;
        for r in &self.rows {
            let ratio = format!("{}/{}", r.succeeded, r.total);
            writeln!(
                f,
                "{:<14} {:<12} {:.1} / {:.1} / {:.1}",
                r.algo, ratio, r.mean_s, r.median_s, r.max_s
            )?;
        }
        write!(
            f,
            "(*) over the {} instances solved by every algorithm",
            self.common
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail(String),
    Skip(String),
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Pass => write!(f, "PASS"),
            Verdict::Fail(why) => write!(f, "FAIL ({why})"),
            Verdict::Skip(why) => write!(f, "SKIP ({why})"),
        }
    }
}

/// Checks a finished search against reference Pareto costs: every solution
/// is a real start-to-destination path whose arcs add up to its label cost,
/// costs are unique, and the cost set equals `expected`.
pub fn check_result(
    graph: &Graph,
    source: usize,
    target: usize,
    result: &SearchResult,
    expected: &[CostVector],
) -> Verdict {
    if result.stats.timed_out {
        return Verdict::Skip("timed out".into());
    }
    let paths = match result.paths() {
        Ok(p) => p,
        Err(e) => return Verdict::Fail(e.to_string()),
    };
    for p in &paths {
        if p.vertices.first() != Some(&source) || p.vertices.last() != Some(&target) {
            return Verdict::Fail(format!(
                "path for {} does not join start and destination",
                p.cost
            ));
        }
        if !p.is_realized_by(graph) {
            return Verdict::Fail(format!("path cost {} does not match its arcs", p.cost));
        }
    }
    let mut costs: Vec<CostVector> = paths.into_iter().map(|p| p.cost).collect();
    costs.sort();
    if costs.windows(2).any(|w| w[0] == w[1]) {
        return Verdict::Fail("duplicate solution costs".into());
    }
    let mut expected = expected.to_vec();
    expected.sort();
    if costs != expected {
        let missing = expected
            .iter()
            .filter(|c| costs.binary_search(c).is_err())
            .count();
        let extra = costs
            .iter()
            .filter(|c| expected.binary_search(c).is_err())
            .count();
        return Verdict::Fail(format!(
            "{missing} missing and {extra} extra solution costs"
        ));
    }
    Verdict::Pass
}

/// Verifies each algorithm on one instance against the brute-force oracle.
/// Returns `None` for every algorithm when the oracle exceeds its budget.
pub fn verify_instance(
    graph: &Graph,
    inst: &Instance,
    algorithms: &[Algorithm],
    budget: usize,
    opts: &RunOptions,
) -> Result<Vec<(Algorithm, Verdict)>> {
    let oracle = match brute_force_pareto(graph, inst.source, inst.target, budget) {
        Ok(paths) => paths,
        Err(Error::OracleInfeasible { budget }) => {
            let why = format!("oracle budget of {budget} labels exceeded");
            return Ok(algorithms
                .iter()
                .map(|&a| (a, Verdict::Skip(why.clone())))
                .collect());
        }
        Err(e) => return Err(e),
    };
    let expected: Vec<CostVector> = oracle.into_iter().map(|p| p.cost).collect();
    let mut out = Vec::with_capacity(algorithms.len());
    for &algorithm in algorithms {
        if !algorithm.supports(inst.num_objectives) {
            out.push((
                algorithm,
                Verdict::Skip(format!("unsupported for M = {}", inst.num_objectives)),
            ));
            continue;
        }
        let mut verdict = match solve(graph, inst.source, inst.target, &opts.config(algorithm)) {
            Ok(result) => {
                let v = check_result(graph, inst.source, inst.target, &result, &expected);
                match (&v, &result.invariants) {
                    (Verdict::Pass, Some(rep)) if rep.total_violations() > 0 => {
                        Verdict::Fail(format!("{} invariant violations", rep.total_violations()))
                    }
                    _ => v,
                }
            }
            Err(e) => Verdict::Fail(e.to_string()),
        };
        if let Verdict::Fail(why) = &mut verdict {
            let _ = write!(why, " on instance {}", inst.id);
        }
        out.push((algorithm, verdict));
    }
    Ok(out)
}
