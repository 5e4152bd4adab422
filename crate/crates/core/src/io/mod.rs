//! Instance ingestion and result output.

pub mod dimacs;
pub mod grid;
pub mod instance;
pub mod results;
pub mod rng;

use std::path::Path;

use crate::error::{Error, Result};

pub use dimacs::{
    derive_degree_cost, merge_cost_files, parse_dimacs_gr, undirected_degrees, write_dimacs_gr,
    DimacsGraph,
};
pub use grid::{
    parse_grid_map, random_cost_graph, synthesize_random_costs, write_grid_map, GridMap,
};
pub use instance::{
    parse_instance_file, read_instance_file, write_instance_file, GraphFactory, GraphSource,
    Instance, InstanceFile,
};
pub use results::{
    read_results, write_results, write_solution_paths, ResultRecord, RESULT_COLUMNS,
};
pub use rng::CostSampler;

pub fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}
