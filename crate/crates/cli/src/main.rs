//! `emoa`: generate instances, solve them, run benchmark batches and check
//! results against the exhaustive oracle.
//!
//! Exit codes: 0 ok, 2 usage or invalid input, 3 timeout, 4 verification
//! failure, 5 I/O.

use std::io::Write as _;
use std::path::{Component, Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use emoa::bench::{self, run_batch, run_instance, summarize, verify_instance, RunOptions, Verdict};
use emoa::io::{
    parse_grid_map, read_file, read_instance_file, write_file, write_instance_file, write_results,
    write_solution_paths, GraphFactory, GraphSource, InstanceFile,
};
use emoa::{Algorithm, Error};

const EXIT_USAGE: u8 = 2;
const EXIT_TIMEOUT: u8 = 3;
const EXIT_VERIFY: u8 = 4;
const EXIT_IO: u8 = 5;

#[derive(Parser)]
#[command(
    name = "emoa",
    version,
    about = "Exact multi-objective shortest-path search"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write an instance file.
    Gen(GenArgs),
    /// Solve one instance and print its result record.
    Solve(SolveArgs),
    /// Run every algorithm on every instance and write a results CSV.
    Bench(BenchArgs),
    /// Compare solution cost sets with the brute-force oracle.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    EmptyGrid,
    Map,
    Dimacs,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    /// Grid width; also the height unless --height is given.
    #[arg(long, required_if_eq("kind", "empty-grid"))]
    size: Option<usize>,
    #[arg(long)]
    height: Option<usize>,
    /// Grid map file (`type`/`height`/`width`/`map` format).
    #[arg(long, required_if_eq("kind", "map"))]
    map: Option<PathBuf>,
    /// Distance and time files in DIMACS `.gr` format.
    #[arg(long, num_args = 2, value_names = ["DISTANCE", "TIME"], required_if_eq("kind", "dimacs"))]
    gr: Vec<PathBuf>,
    /// Number of objectives.
    #[arg(long = "M", value_name = "M")]
    num_objectives: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 50)]
    count: usize,
    #[arg(long, default_value_t = 1)]
    lo: u32,
    #[arg(long, default_value_t = 10)]
    hi: u32,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    instance: PathBuf,
    /// Instance id; defaults to the first instance in the file.
    #[arg(long)]
    id: Option<usize>,
    #[arg(long, value_parser = parse_algorithm)]
    algo: Algorithm,
    /// Time limit in seconds.
    #[arg(long, default_value_t = 600.0)]
    timeout: f64,
    /// Dump solution paths to FILE, or to stdout when no FILE is given.
    #[arg(long, value_name = "FILE", num_args = 0..=1, default_missing_value = "-")]
    paths: Option<PathBuf>,
    /// Results CSV; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write zero in the timing column.
    #[arg(long)]
    no_timing: bool,
    /// Record invariant violations during the search.
    #[arg(long)]
    verify: bool,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    instances: PathBuf,
    /// Comma-separated algorithms; all by default, skipping unsupported M.
    #[arg(long, value_delimiter = ',', value_parser = parse_algorithm)]
    algos: Vec<Algorithm>,
    /// Time limit per run in seconds.
    #[arg(long, default_value_t = 600.0)]
    timeout: f64,
    /// Results CSV; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    no_timing: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    instances: PathBuf,
    #[arg(long, value_delimiter = ',', value_parser = parse_algorithm)]
    algos: Vec<Algorithm>,
    /// Oracle label budget per instance.
    #[arg(long, default_value_t = 5_000_000)]
    budget: usize,
    /// Time limit per run in seconds.
    #[arg(long, default_value_t = 600.0)]
    timeout: f64,
}

fn parse_algorithm(s: &str) -> Result<Algorithm, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn time_limit(secs: f64) -> Result<Duration, Failure> {
    Duration::try_from_secs_f64(secs).map_err(|_| Failure::usage(format!("invalid timeout {secs}")))
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Io { .. } => EXIT_IO,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let status = match cli.command {
        Command::Gen(args) => cmd_gen(args),
        Command::Solve(args) => cmd_solve(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Verify(args) => cmd_verify(args),
    };
    match status {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("emoa: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => Ok(write_file(path, text)?),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Error::io("<stdout>", e).into())
        }
    }
}

/// Path to `target` as written in an instance file stored in `out_dir`.
fn relative_to(target: &Path, out_dir: &Path) -> Result<PathBuf, Failure> {
    let target = target.canonicalize().map_err(|e| Error::io(target, e))?;
    let dir = if out_dir.as_os_str().is_empty() {
        Path::new(".")
    } else {
        out_dir
    };
    let dir = dir.canonicalize().map_err(|e| Error::io(dir, e))?;
    let common = target
        .components()
        .zip(dir.components())
        .take_while(|(a, b)| a == b)
        .count();
    let mut rel: PathBuf = dir
        .components()
        .skip(common)
        .map(|_| Component::ParentDir)
        .collect();
    rel.extend(target.components().skip(common));
    Ok(rel)
}

fn cmd_gen(args: GenArgs) -> Result<u8, Failure> {
    let out_dir = match &args.out {
        Some(p) => p.parent().unwrap_or(Path::new(".")).to_path_buf(),
        None => PathBuf::from("."),
    };
    let (source, factory) = match args.kind {
        Kind::EmptyGrid => {
            if args.map.is_some() || !args.gr.is_empty() {
                return Err(Failure::usage(
                    "--kind empty-grid takes --size, not --map or --gr",
                ));
            }
            let width = args
                .size
                .ok_or_else(|| Failure::usage("--size is required"))?;
            let height = args.height.unwrap_or(width);
            let source = GraphSource::EmptyGrid { width, height };
            let factory = GraphFactory::load(&source, Path::new("."))?;
            (source, factory)
        }
        Kind::Map => {
            if args.size.is_some() || !args.gr.is_empty() {
                return Err(Failure::usage("--kind map takes --map, not --size or --gr"));
            }
            let map = args
                .map
                .as_deref()
                .ok_or_else(|| Failure::usage("--map is required"))?;
            let grid = parse_grid_map(&read_file(map)?)?;
            let source = GraphSource::Map {
                path: relative_to(map, &out_dir)?,
            };
            (source, GraphFactory::from_grid(grid))
        }
        Kind::Dimacs => {
            if args.size.is_some() || args.map.is_some() {
                return Err(Failure::usage(
                    "--kind dimacs takes --gr, not --size or --map",
                ));
            }
            let [distance, time] = args.gr.as_slice() else {
                return Err(Failure::usage("--gr needs a distance file and a time file"));
            };
            let factory = GraphFactory::load(
                &GraphSource::Dimacs {
                    distance: distance.clone(),
                    time: time.clone(),
                },
                Path::new("."),
            )?;
            let source = GraphSource::Dimacs {
                distance: relative_to(distance, &out_dir)?,
                time: relative_to(time, &out_dir)?,
            };
            (source, factory)
        }
    };
    let instances =
        factory.generate(args.num_objectives, args.seed, args.count, args.lo, args.hi)?;
    let file = InstanceFile {
        graph: source,
        instances,
    };
    emit(args.out.as_deref(), &write_instance_file(&file))?;
    Ok(0)
}

fn load(path: &Path) -> Result<(InstanceFile, GraphFactory), Failure> {
    let file = read_instance_file(path)?;
    let factory = GraphFactory::for_file(&file, path)?;
    Ok((file, factory))
}

fn cmd_solve(args: SolveArgs) -> Result<u8, Failure> {
    let (file, factory) = load(&args.instance)?;
    let inst = match args.id {
        Some(id) => file
            .get(id)
            .ok_or_else(|| Failure::usage(format!("no instance with id {id}")))?,
        None => file
            .instances
            .first()
            .ok_or_else(|| Failure::usage("instance file holds no instances"))?,
    };
    let opts = RunOptions {
        time_limit: Some(time_limit(args.timeout)?),
        timing: !args.no_timing,
        verify: args.verify,
    };
    let graph = factory.build(inst)?;
    let (record, result) = run_instance(&graph, inst, args.algo, &opts)?;
    emit(
        args.out.as_deref(),
        &write_results(std::slice::from_ref(&record))?,
    )?;
    if let Some(dest) = &args.paths {
        let text = write_solution_paths(&result.paths()?);
        emit((dest != Path::new("-")).then_some(dest.as_path()), &text)?;
    }
    if !args.no_timing {
        eprintln!(
            "heuristic time: {:.3} ms",
            result.stats.heuristic_time.as_secs_f64() * 1e3
        );
    }
    if let Some(report) = &result.invariants {
        if report.total_violations() > 0 {
            eprintln!("{report:?}");
            return Ok(EXIT_VERIFY);
        }
    }
    Ok(if record.timed_out { EXIT_TIMEOUT } else { 0 })
}

fn algorithms_or_all(algos: Vec<Algorithm>) -> (Vec<Algorithm>, bool) {
    if algos.is_empty() {
        (Algorithm::ALL.to_vec(), true)
    } else {
        (algos, false)
    }
}

fn cmd_bench(args: BenchArgs) -> Result<u8, Failure> {
    let (file, factory) = load(&args.instances)?;
    let (algorithms, skip_unsupported) = algorithms_or_all(args.algos);
    let opts = RunOptions {
        time_limit: Some(time_limit(args.timeout)?),
        timing: !args.no_timing,
        verify: false,
    };
    let output = run_batch(
        &file,
        &factory,
        &algorithms,
        &opts,
        skip_unsupported,
        bench::worker_count(),
    );
    emit(args.out.as_deref(), &write_results(&output.records)?)?;
    for f in &output.failures {
        eprintln!("instance {} {}: {}", f.instance, f.algo, f.message);
    }
    let summary = summarize(&output.records);
    if args.out.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    Ok(0)
}

fn cmd_verify(args: VerifyArgs) -> Result<u8, Failure> {
    let (file, factory) = load(&args.instances)?;
    let (algorithms, _) = algorithms_or_all(args.algos);
    let opts = RunOptions {
        time_limit: Some(time_limit(args.timeout)?),
        timing: false,
        verify: true,
    };
    let (mut pass, mut fail, mut skip) = (0usize, 0usize, 0usize);
    for inst in &file.instances {
        let graph = factory.build(inst)?;
        for (algorithm, verdict) in verify_instance(&graph, inst, &algorithms, args.budget, &opts)?
        {
            match verdict {
                Verdict::Pass => pass += 1,
                Verdict::Fail(_) => fail += 1,
                Verdict::Skip(_) => skip += 1,
            }
            println!("instance {} {algorithm}: {verdict}", inst.id);
        }
    }
    println!("verify: {pass} passed, {fail} failed, {skip} skipped");
    Ok(if fail > 0 { EXIT_VERIFY } else { 0 })
}
