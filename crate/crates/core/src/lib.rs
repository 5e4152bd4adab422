//! Exact multi-objective shortest-path search.
//!
//! The search framework ([`search`]) pops labels in lexicographic order of
//! their f-vectors and checks them lazily against per-vertex frontiers of
//! projected cost vectors. Frontiers are AVL trees ([`frontier::NdTree`]) for
//! EMOA*/TOA*, a single scalar for two objectives, or plain/sorted lists for
//! the ext-BOA* baselines. NAMOA*-dr ([`namoa`]) and a heuristic-free
//! exhaustive enumerator ([`oracle`]) serve as references.

pub mod bench;
pub mod error;
pub mod frontier;
pub mod graph;
pub mod io;
pub mod label;
pub mod namoa;
pub mod oracle;
pub mod search;
pub mod vector;

pub use error::{Error, Result};
pub use graph::{Arc, Graph, PathResult};
pub use label::{Label, LabelId, LabelPool};
pub use search::{solve, Algorithm, SearchResult, SearchStats, SolverConfig};
pub use vector::{dominates, leq, lex_less, project, vec_add, CostVector, ProjectedVector};
