//! Instance files.
//!
//! ```text
//! # comment
//! graph empty-grid <width> <height>
//! graph map <file.map>
//! graph dimacs <distance.gr> <time.gr>
//! instance <id> <v_o> <v_d> <M> <seed> <lo> <hi>
//! ```
//!
//! Exactly one `graph` line precedes the instances. Relative paths resolve
//! against the directory holding the instance file. Grid instances draw
//! their costs from `seed`; road instances use the file costs (M = 2) plus
//! the degree cost (M = 3), and `seed`, `lo`, `hi` record how the endpoints
//! were chosen.

use std::borrow::Cow;
use std::collections::{HashSet, VecDeque};
use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::graph::Graph;

use super::dimacs::{derive_degree_cost, merge_cost_files, parse_dimacs_gr};
use super::grid::{parse_grid_map, synthesize_random_costs, GridMap};
use super::read_file;
use super::rng::CostSampler;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphSource {
    EmptyGrid { width: usize, height: usize },
    Map { path: PathBuf },
    Dimacs { distance: PathBuf, time: PathBuf },
}

impl fmt::Display for GraphSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphSource::EmptyGrid { width, height } => write!(f, "empty-grid {width} {height}"),
            GraphSource::Map { path } => write!(f, "map {}", path.display()),
            GraphSource::Dimacs { distance, time } => {
                write!(f, "dimacs {} {}", distance.display(), time.display())
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Instance {
    pub id: usize,
    pub source: usize,
    pub target: usize,
    pub num_objectives: usize,
    pub seed: u64,
    pub lo: u32,
    pub hi: u32,
}

impl Instance {
    pub fn validate(&self) -> Result<()> {
        if self.num_objectives == 0 {
            return Err(Error::InvalidInstance(format!(
                "instance {}: M must be positive",
                self.id
            )));
        }
        if self.lo < 1 || self.hi < self.lo {
            return Err(Error::InvalidInstance(format!(
                "instance {}: invalid cost range [{},{}]",
                self.id, self.lo, self.hi
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceFile {
    pub graph: GraphSource,
    pub instances: Vec<Instance>,
}

impl InstanceFile {
    pub fn get(&self, id: usize) -> Option<&Instance> {
        self.instances.iter().find(|i| i.id == id)
    }
}

pub fn parse_instance_file(text: &str) -> Result<InstanceFile> {
    let mut graph = None;
    let mut instances = Vec::new();
    let mut ids = HashSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = body.split_whitespace().collect();
        match tokens.as_slice() {
            [] => {}
            ["graph", rest @ ..] => {
                if graph.is_some() {
                    return Err(Error::parse(line, "duplicate graph line"));
                }
                if !instances.is_empty() {
                    return Err(Error::parse(line, "graph line must precede instances"));
                }
                graph = Some(match rest {
                    ["empty-grid", w, h] => GraphSource::EmptyGrid {
                        width: field(w, line, "width")?,
                        height: field(h, line, "height")?,
                    },
                    ["map", p] => GraphSource::Map { path: p.into() },
                    ["dimacs", d, t] => GraphSource::Dimacs {
                        distance: d.into(),
                        time: t.into(),
                    },
                    _ => {
                        return Err(Error::parse(
                            line,
                            format!("bad graph line '{}'", body.trim()),
                        ))
                    }
                });
            }
            ["instance", id, vo, vd, m, seed, lo, hi] => {
                if graph.is_none() {
                    return Err(Error::parse(line, "instance before graph line"));
                }
                let inst = Instance {
                    id: field(id, line, "id")?,
                    source: field(vo, line, "v_o")?,
                    target: field(vd, line, "v_d")?,
                    num_objectives: field(m, line, "M")?,
                    seed: field(seed, line, "seed")?,
                    lo: field(lo, line, "lo")?,
                    hi: field(hi, line, "hi")?,
                };
                inst.validate()
                    .map_err(|e| Error::parse(line, e.to_string()))?;
                if !ids.insert(inst.id) {
                    return Err(Error::parse(
                        line,
                        format!("duplicate instance id {}", inst.id),
                    ));
                }
                instances.push(inst);
            }
            _ => {
                return Err(Error::parse(
                    line,
                    format!("unrecognised line '{}'", body.trim()),
                ))
            }
        }
    }
    let graph = graph.ok_or_else(|| Error::parse(0, "missing graph line"))?;
    Ok(InstanceFile { graph, instances })
}

fn field<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T> {
    tok.parse()
        .map_err(|_| Error::parse(line, format!("{what} '{tok}' is not a valid number")))
}

pub fn write_instance_file(file: &InstanceFile) -> String {
    let mut out = format!("graph {}\n", file.graph);
    for i in &file.instances {
        writeln!(
            out,
            "instance {} {} {} {} {} {} {}",
            i.id, i.source, i.target, i.num_objectives, i.seed, i.lo, i.hi
        )
        .unwrap();
    }
    out
}

pub fn read_instance_file(path: &Path) -> Result<InstanceFile> {
    parse_instance_file(&read_file(path)?)
}

enum Base {
    Grid(GridMap),
    Road { two: Graph, three: Graph },
}

/// Loads the underlying map or road network once and builds per-instance
/// graphs from it.
pub struct GraphFactory {
    base: Base,
}

impl GraphFactory {
    pub fn load(source: &GraphSource, base_dir: &Path) -> Result<Self> {
        let base = match source {
            GraphSource::EmptyGrid { width, height } => {
                Base::Grid(GridMap::empty(*width, *height)?)
            }
            GraphSource::Map { path } => {
                Base::Grid(parse_grid_map(&read_file(&base_dir.join(path))?)?)
            }
            GraphSource::Dimacs { distance, time } => {
                let d = parse_dimacs_gr(&read_file(&base_dir.join(distance))?)?;
                let t = parse_dimacs_gr(&read_file(&base_dir.join(time))?)?;
                let two = merge_cost_files(&[d, t])?;
                let three = derive_degree_cost(&two)?;
                Base::Road { two, three }
            }
        };
        Ok(GraphFactory { base })
    }

    pub fn from_grid(grid: GridMap) -> Self {
        GraphFactory {
            base: Base::Grid(grid),
        }
    }

    pub fn for_file(file: &InstanceFile, path: &Path) -> Result<Self> {
        GraphFactory::load(&file.graph, path.parent().unwrap_or(Path::new(".")))
    }

    pub fn num_vertices(&self) -> usize {
        match &self.base {
            Base::Grid(g) => g.num_cells(),
            Base::Road { two, .. } => two.num_vertices(),
        }
    }

    pub fn grid(&self) -> Option<&GridMap> {
        match &self.base {
            Base::Grid(g) => Some(g),
            Base::Road { .. } => None,
        }
    }

    pub fn build(&self, inst: &Instance) -> Result<Cow<'_, Graph>> {
        inst.validate()?;
        let graph = match &self.base {
            Base::Grid(grid) => Cow::Owned(synthesize_random_costs(
                grid,
                inst.num_objectives,
                inst.seed,
                inst.lo,
                inst.hi,
            )?),
            Base::Road { two, three } => match inst.num_objectives {
                2 => Cow::Borrowed(two),
                3 => Cow::Borrowed(three),
                m => {
                    return Err(Error::InvalidInstance(format!(
                        "road instances support M = 2 or 3, got {m}"
                    )))
                }
            },
        };
        graph.check_vertex(inst.source)?;
        graph.check_vertex(inst.target)?;
        Ok(graph)
    }

    /// `count` instances with seeds `seed, seed + 1, …`. Empty grids run
    /// corner to corner (lower-left to upper-right); otherwise endpoints are
    /// drawn uniformly among pairs with a path from start to destination.
    pub fn generate(
        &self,
        num_objectives: usize,
        seed: u64,
        count: usize,
        lo: u32,
        hi: u32,
    ) -> Result<Vec<Instance>> {
        let mut picker = CostSampler::new(seed, 1, 1)?;
        let mut out = Vec::with_capacity(count);
        for id in 0..count {
            let (source, target) = match &self.base {
                Base::Grid(grid) if grid.passable_cells().len() == grid.num_cells() => {
                    (grid.lower_left(), grid.upper_right())
                }
                Base::Grid(grid) => {
                    pick_pair(&mut picker, &grid.passable_cells(), |s| grid.component(s))?
                }
                Base::Road { two, .. } => {
                    let all: Vec<usize> = (0..two.num_vertices()).collect();
                    pick_pair(&mut picker, &all, |s| reachable(two, s))?
                }
            };
            let inst = Instance {
                id,
                source,
                target,
                num_objectives,
                seed: seed.wrapping_add(id as u64),
                lo,
                hi,
            };
            inst.validate()?;
            out.push(inst);
        }
        Ok(out)
    }
}

const MAX_ATTEMPTS: usize = 1000;

fn pick_pair(
    picker: &mut CostSampler,
    candidates: &[usize],
    reach: impl Fn(usize) -> Vec<usize>,
) -> Result<(usize, usize)> {
    if candidates.is_empty() {
        return Err(Error::InvalidInstance(
            "graph has no usable vertices".into(),
        ));
    }
    for _ in 0..MAX_ATTEMPTS {
        let s = candidates[picker.index(candidates.len())];
        let targets: Vec<usize> = reach(s).into_iter().filter(|&t| t != s).collect();
        if !targets.is_empty() {
            return Ok((s, targets[picker.index(targets.len())]));
        }
    }
    Err(Error::InvalidInstance(
        "could not find a connected start/destination pair".into(),
    ))
}

fn reachable(graph: &Graph, s: usize) -> Vec<usize> {
    let mut seen = vec![false; graph.num_vertices()];
    let mut queue = VecDeque::from([s]);
    let mut out = Vec::new();
    seen[s] = true;
    while let Some(v) = queue.pop_front() {
        out.push(v);
        for arc in graph.successors(v) {
            if !seen[arc.head] {
                seen[arc.head] = true;
                queue.push_back(arc.head);
            }
        }
    }
    out.sort_unstable();
    out
}
