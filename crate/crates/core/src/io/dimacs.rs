//! DIMACS shortest-path `.gr` files:
//!
//! ```text
//! c comment
//! p sp <n> <m>
//! a <u> <v> <w>      (1-based vertex ids)
//! ```

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DimacsGraph {
    pub num_vertices: usize,
    /// `(tail, head, weight)` with 0-based vertex ids, in file order.
    pub arcs: Vec<(usize, usize, u64)>,
}

pub fn parse_dimacs_gr(text: &str) -> Result<DimacsGraph> {
    let mut header: Option<(usize, usize)> = None;
    let mut arcs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let mut parts = raw.split_whitespace();
        match parts.next() {
            None | Some("c") => {}
            Some("p") => {
                if header.is_some() {
                    return Err(Error::parse(line, "duplicate problem line"));
                }
                if parts.next() != Some("sp") {
                    return Err(Error::parse(line, "expected 'p sp <n> <m>'"));
                }
                let n = number(parts.next(), line, "vertex count")?;
                let m = number(parts.next(), line, "arc count")?;
                extra(parts.next(), line)?;
                header = Some((n as usize, m as usize));
                arcs.reserve(m as usize);
            }
            Some("a") => {
                let (n, _) = header.ok_or_else(|| Error::parse(line, "arc before problem line"))?;
                let u = vertex(parts.next(), n, line)?;
                let v = vertex(parts.next(), n, line)?;
                let w = number(parts.next(), line, "weight")?;
                if w > u64::from(u32::MAX) {
                    return Err(Error::parse(line, format!("weight {w} exceeds 32 bits")));
                }
                extra(parts.next(), line)?;
                arcs.push((u, v, w));
            }
            Some(tok) if tok.starts_with('c') => {}
            Some(tok) => return Err(Error::parse(line, format!("unknown line type '{tok}'"))),
        }
    }
    let (num_vertices, m) = header.ok_or_else(|| Error::parse(0, "missing problem line"))?;
    if arcs.len() != m {
        return Err(Error::parse(
            0,
            format!("problem line declares {m} arcs, found {}", arcs.len()),
        ));
    }
    Ok(DimacsGraph { num_vertices, arcs })
}

fn number(tok: Option<&str>, line: usize, what: &str) -> Result<u64> {
    let tok = tok.ok_or_else(|| Error::parse(line, format!("missing {what}")))?;
    tok.parse::<u64>().map_err(|_| {
        Error::parse(
            line,
            format!("{what} '{tok}' is not a non-negative integer"),
        )
    })
}

fn vertex(tok: Option<&str>, n: usize, line: usize) -> Result<usize> {
    let v = number(tok, line, "vertex id")?;
    if v == 0 || v as usize > n {
        return Err(Error::parse(line, format!("vertex id {v} outside 1..={n}")));
    }
    Ok(v as usize - 1)
}

fn extra(tok: Option<&str>, line: usize) -> Result<()> {
    match tok {
        Some(t) => Err(Error::parse(line, format!("unexpected token '{t}'"))),
        None => Ok(()),
    }
}

pub fn write_dimacs_gr(graph: &DimacsGraph) -> String {
    let mut out = String::new();
    writeln!(out, "p sp {} {}", graph.num_vertices, graph.arcs.len()).unwrap();
    for &(u, v, w) in &graph.arcs {
        writeln!(out, "a {} {} {w}", u + 1, v + 1).unwrap();
    }
    out
}

/// Stacks the per-file weights into cost vectors, in argument order.
/// Files must list the same `(tail, head)` sequence.
pub fn merge_cost_files(files: &[DimacsGraph]) -> Result<Graph> {
    let first = files
        .first()
        .ok_or_else(|| Error::InvalidInstance("no cost files given".into()))?;
    for (k, other) in files.iter().enumerate().skip(1) {
        if other.num_vertices != first.num_vertices {
            return Err(Error::DataInconsistency(format!(
                "file {k} has {} vertices, file 0 has {}",
                other.num_vertices, first.num_vertices
            )));
        }
        if other.arcs.len() != first.arcs.len() {
            return Err(Error::DataInconsistency(format!(
                "file {k} has {} arcs, file 0 has {}",
                other.arcs.len(),
                first.arcs.len()
            )));
        }
        if let Some(i) = (0..first.arcs.len())
            .find(|&i| first.arcs[i].0 != other.arcs[i].0 || first.arcs[i].1 != other.arcs[i].1)
        {
            let (u, v, _) = other.arcs[i];
            return Err(Error::DataInconsistency(format!(
                "arc {} ({} -> {}) of file {k} does not match file 0",
                i + 1,
                u + 1,
                v + 1
            )));
        }
    }
    let mut graph = Graph::new(first.num_vertices, files.len())?;
    let mut cost = Vec::with_capacity(files.len());
    for i in 0..first.arcs.len() {
        cost.clear();
        cost.extend(files.iter().map(|f| f.arcs[i].2));
        graph.add_arc(first.arcs[i].0, first.arcs[i].1, &cost)?;
    }
    Ok(graph)
}

/// Number of distinct neighbours of every vertex, ignoring arc direction
/// and self-loops.
pub fn undirected_degrees(graph: &Graph) -> Vec<usize> {
    let mut neighbours: Vec<Vec<usize>> = vec![Vec::new(); graph.num_vertices()];
    for (u, arc) in graph.arcs() {
        if u != arc.head {
            neighbours[u].push(arc.head);
            neighbours[arc.head].push(u);
        }
    }
    neighbours
        .into_iter()
        .map(|mut n| {
            n.sort_unstable();
            n.dedup();
            n.len()
        })
        .collect()
}

/// Appends `c = 2` when `(deg(u) + deg(v)) / 2 >= 4`, otherwise `c = 1`.
pub fn derive_degree_cost(graph: &Graph) -> Result<Graph> {
    let deg = undirected_degrees(graph);
    graph.with_extra_objective(|u, arc| if deg[u] + deg[arc.head] >= 8 { 2 } else { 1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_arc() {
        let g = parse_dimacs_gr("p sp 2 1\na 1 2 7\n").unwrap();
        assert_eq!(g.arcs, vec![(0, 1, 7)]);
        assert_eq!(g.num_vertices, 2);
    }

    #[test]
    fn comments_only() {
        let g = parse_dimacs_gr("c hello\nc\np sp 5 0\n").unwrap();
        assert!(g.arcs.is_empty());
    }

    #[test]
    fn errors() {
        assert!(matches!(
            parse_dimacs_gr("p sp 2 2\na 1 2 7\n"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_dimacs_gr("p sp 2 1\na 1 2 7.5\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_dimacs_gr("a 1 2 7\np sp 2 1\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_dimacs_gr("p sp 2 1\na 1 3 7\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_dimacs_gr("p sp 2 1\na 0 1 7\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(parse_dimacs_gr("c no header\n").is_err());
        assert!(parse_dimacs_gr("p sp 2 1\na 1 2 -3\n").is_err());
        assert!(parse_dimacs_gr("p max 2 1\n").is_err());
    }

    #[test]
    fn merge() {
        let d = parse_dimacs_gr("p sp 2 1\na 1 2 7\n").unwrap();
        let t = parse_dimacs_gr("p sp 2 1\na 1 2 3\n").unwrap();
        let g = merge_cost_files(&[d.clone(), t.clone()]).unwrap();
        assert_eq!(g.successors(0)[0].cost.as_slice(), &[7, 3]);
        let g3 = merge_cost_files(&[d.clone(), t, d]).unwrap();
        assert_eq!(g3.successors(0)[0].cost.dim(), 3);
    }

    #[test]
    fn merge_mismatch_names_arc() {
        let d = parse_dimacs_gr("p sp 3 2\na 1 2 7\na 2 3 1\n").unwrap();
        let t = parse_dimacs_gr("p sp 3 2\na 1 2 3\na 3 2 1\n").unwrap();
        match merge_cost_files(&[d, t]) {
            Err(Error::DataInconsistency(msg)) => assert!(msg.contains("3 -> 2"), "{msg}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn degree_rule() {
        // isolated edge
        let mut g = Graph::new(2, 1).unwrap();
        g.add_edge(0, 1, &[1]).unwrap();
        let d = derive_degree_cost(&g).unwrap();
        assert!(d.arcs().all(|(_, a)| a.cost[1] == 1));

        // hubs 0 and 1 joined, each with 3 extra leaves: deg 4 + 4
        let mut g = Graph::new(8, 1).unwrap();
        g.add_edge(0, 1, &[1]).unwrap();
        for leaf in 2..5 {
            g.add_edge(0, leaf, &[1]).unwrap();
        }
        for leaf in 5..8 {
            g.add_edge(1, leaf, &[1]).unwrap();
        }
        let d = derive_degree_cost(&g).unwrap();
        let hub = d.successors(0).iter().find(|a| a.head == 1).unwrap();
        assert_eq!(hub.cost[1], 2);

        // drop one leaf of vertex 0: deg 3 + 4 < 8
        let mut g = Graph::new(7, 1).unwrap();
        g.add_edge(0, 1, &[1]).unwrap();
        for leaf in 2..4 {
            g.add_edge(0, leaf, &[1]).unwrap();
        }
        for leaf in 4..7 {
            g.add_edge(1, leaf, &[1]).unwrap();
        }
        let d = derive_degree_cost(&g).unwrap();
        let arc = d.successors(0).iter().find(|a| a.head == 1).unwrap();
        assert_eq!(arc.cost[1], 1);
    }

    #[test]
    fn round_trip() {
        let g = parse_dimacs_gr("c x\np sp 4 3\na 1 2 7\na 2 3 9\na 4 1 0\n").unwrap();
        assert_eq!(parse_dimacs_gr(&write_dimacs_gr(&g)).unwrap(), g);
    }
}
