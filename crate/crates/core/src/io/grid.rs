//! Grid maps in the movingai benchmark format:
//!
//! ```text
//! type octile
//! height H
//! width W
//! map
//! <H rows of W characters>
//! ```
//!
//! `.`, `G` and `S` are passable; `@`, `O`, `T` and `W` are blocked.
//! Vertex ids are row-major (`row * W + col`, row 0 at the top) over all
//! cells; blocked cells are isolated vertices.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::Graph;

use super::rng::CostSampler;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridMap {
    width: usize,
    height: usize,
    passable: Vec<bool>,
}

impl GridMap {
    pub fn new(width: usize, height: usize, passable: Vec<bool>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidInstance(format!(
                "grid must be non-empty, got {width}x{height}"
            )));
        }
        if passable.len() != width * height {
            return Err(Error::InvalidInstance(
                "cell count does not match grid size".into(),
            ));
        }
        Ok(GridMap {
            width,
            height,
            passable,
        })
    }

    pub fn empty(width: usize, height: usize) -> Result<Self> {
        GridMap::new(width, height, vec![true; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn num_cells(&self) -> usize {
        self.passable.len()
    }

    pub fn is_passable(&self, row: usize, col: usize) -> bool {
        row < self.height && col < self.width && self.passable[row * self.width + col]
    }

    pub fn vertex(&self, row: usize, col: usize) -> usize {
        row * self.width + col
    }

    pub fn cell(&self, vertex: usize) -> (usize, usize) {
        (vertex / self.width, vertex % self.width)
    }

    pub fn lower_left(&self) -> usize {
        self.vertex(self.height - 1, 0)
    }

    pub fn upper_right(&self) -> usize {
        self.vertex(0, self.width - 1)
    }

    /// Undirected four-connected adjacencies in sampling order: row-major
    /// cells, east neighbour before south neighbour.
    pub fn adjacencies(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for row in 0..self.height {
            for col in 0..self.width {
                if !self.is_passable(row, col) {
                    continue;
                }
                let v = self.vertex(row, col);
                if self.is_passable(row, col + 1) {
                    out.push((v, v + 1));
                }
                if self.is_passable(row + 1, col) {
                    out.push((v, v + self.width));
                }
            }
        }
        out
    }

    /// Passable cells reachable from `vertex`.
    pub fn component(&self, vertex: usize) -> Vec<usize> {
        let (r, c) = self.cell(vertex);
        if !self.is_passable(r, c) {
            return Vec::new();
        }
        let mut seen = vec![false; self.num_cells()];
        let mut queue = VecDeque::from([vertex]);
        let mut out = Vec::new();
        seen[vertex] = true;
        while let Some(v) = queue.pop_front() {
            out.push(v);
            let (r, c) = self.cell(v);
            let neighbours = [
                (r.wrapping_sub(1), c),
                (r + 1, c),
                (r, c.wrapping_sub(1)),
                (r, c + 1),
            ];
            for (nr, nc) in neighbours {
                if self.is_passable(nr, nc) {
                    let u = self.vertex(nr, nc);
                    if !seen[u] {
                        seen[u] = true;
                        queue.push_back(u);
                    }
                }
            }
        }
        out
    }

    pub fn passable_cells(&self) -> Vec<usize> {
        (0..self.num_cells())
            .filter(|&v| self.passable[v])
            .collect()
    }
}

pub fn parse_grid_map(text: &str) -> Result<GridMap> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')));
    let mut next = |what: &str| {
        lines
            .next()
            .ok_or_else(|| Error::parse(0, format!("unexpected end of file, expected {what}")))
    };

    let (line, typ) = next("type line")?;
    if !typ.starts_with("type") {
        return Err(Error::parse(line, "expected 'type <name>'"));
    }
    let mut height = None;
    let mut width = None;
    for _ in 0..2 {
        let (line, text) = next("height/width line")?;
        let mut parts = text.split_whitespace();
        let key = parts.next().unwrap_or("");
        let value = parts
            .next()
            .and_then(|v| v.parse::<usize>().ok())
            .filter(|&v| v > 0)
            .ok_or_else(|| Error::parse(line, format!("bad dimension line '{text}'")))?;
        match key {
            "height" if height.is_none() => height = Some(value),
            "width" if width.is_none() => width = Some(value),
            _ => {
                return Err(Error::parse(
                    line,
                    format!("expected height or width, got '{text}'"),
                ))
            }
        }
    }
    let (height, width) = (height.expect("set above"), width.expect("set above"));
    let (line, map) = next("'map'")?;
    if map.trim() != "map" {
        return Err(Error::parse(line, "expected 'map'"));
    }

    let mut passable = Vec::with_capacity(width * height);
    for _ in 0..height {
        let (line, row) = next("map row")?;
        if row.len() != width {
            return Err(Error::parse(
                line,
                format!("row has {} cells, expected {width}", row.len()),
            ));
        }
        for ch in row.chars() {
            passable.push(match ch {
                '.' | 'G' | 'S' => true,
                '@' | 'O' | 'T' | 'W' => false,
                other => return Err(Error::parse(line, format!("unknown terrain '{other}'"))),
            });
        }
    }
    for (line, rest) in lines {
        if !rest.trim().is_empty() {
            return Err(Error::parse(line, "trailing data after map rows"));
        }
    }
    GridMap::new(width, height, passable)
}

pub fn write_grid_map(grid: &GridMap) -> String {
    let mut out = format!(
        "type octile\nheight {}\nwidth {}\nmap\n",
        grid.height, grid.width
    );
    for row in 0..grid.height {
        for col in 0..grid.width {
            out.push(if grid.is_passable(row, col) { '.' } else { '@' });
        }
        out.push('\n');
    }
    out
}

/// One cost vector per undirected adjacency, shared by both arc directions,
/// drawn in the order the adjacencies are given.
pub fn random_cost_graph(
    num_vertices: usize,
    adjacencies: &[(usize, usize)],
    num_objectives: usize,
    sampler: &mut CostSampler,
) -> Result<Graph> {
    let mut graph = Graph::new(num_vertices, num_objectives)?;
    for &(u, v) in adjacencies {
        let cost = sampler.sample_vector(num_objectives);
        graph.add_edge(u, v, &cost)?;
    }
    Ok(graph)
}

/// Four-connected graph over `grid` with i.i.d. costs uniform in `[lo, hi]`.
pub fn synthesize_random_costs(
    grid: &GridMap,
    num_objectives: usize,
    seed: u64,
    lo: u32,
    hi: u32,
) -> Result<Graph> {
    let mut sampler = CostSampler::new(seed, lo, hi)?;
    random_cost_graph(
        grid.num_cells(),
        &grid.adjacencies(),
        num_objectives,
        &mut sampler,
    )
}
