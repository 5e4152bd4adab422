//! Results CSV and solution-path dumps.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::PathResult;

pub const RESULT_COLUMNS: [&str; 9] = [
    "instance",
    "algo",
    "M",
    "runtime_ms",
    "n_solutions",
    "n_expanded",
    "n_generated",
    "n_dominance_checks",
    "timed_out",
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub instance: usize,
    pub algo: String,
    #[serde(rename = "M")]
    pub m: usize,
    pub runtime_ms: f64,
    pub n_solutions: u64,
    pub n_expanded: u64,
    pub n_generated: u64,
    pub n_dominance_checks: u64,
    pub timed_out: bool,
}

pub fn write_results(records: &[ResultRecord]) -> Result<String> {
    let mut writer = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    writer.write_record(RESULT_COLUMNS)?;
    for r in records {
        writer.serialize(r)?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| csv::Error::from(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn read_results(text: &str) -> Result<Vec<ResultRecord>> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let mut out = Vec::new();
    for row in reader.deserialize() {
        out.push(row?);
    }
    Ok(out)
}

/// One line per solution: `(c1,c2,…) ; v_o v_1 … v_d`.
pub fn write_solution_paths(paths: &[PathResult]) -> String {
    let mut out = String::new();
    for p in paths {
        write!(out, "{} ;", p.cost).unwrap();
        for v in &p.vertices {
            write!(out, " {v}").unwrap();
        }
        out.push('\n');
    }
    out
}
