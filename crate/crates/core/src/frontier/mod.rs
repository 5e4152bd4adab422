//! Incremental non-dominated sets answering "is anything `<= b`?" (check)
//! and maintaining ND(B + {b}) (update).

mod list;
mod scalar;
mod tree;

pub use list::NdList;
pub use scalar::ScalarFrontier;
pub use tree::NdTree;

use crate::error::{Error, Result};

/// Work counters for frontier operations.
///
/// `dominance_checks` counts full-vector `leq`/`dominates` comparisons;
/// lexicographic comparisons used to navigate a tree are not counted.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OpCounter {
    pub dominance_checks: u64,
    pub nodes_visited: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    /// AVL tree with the general check.
    Tree,
    /// AVL tree with the single-path check for two-dimensional keys.
    Tree2d,
    /// Unsorted list.
    List,
    /// Lexicographically sorted list.
    SortedList,
    /// One scalar for one-dimensional keys.
    Scalar,
}

#[derive(Clone, Debug)]
pub enum Frontier {
    Tree(NdTree),
    Tree2d(NdTree),
    List(NdList),
    Scalar(ScalarFrontier),
}

impl Frontier {
    pub fn new(backend: Backend, dim: usize) -> Result<Self> {
        Ok(match backend {
            Backend::Tree => Frontier::Tree(NdTree::new(dim)),
            Backend::Tree2d if dim == 2 => Frontier::Tree2d(NdTree::new(dim)),
            Backend::Tree2d => {
                return Err(Error::InvalidUse(format!(
                    "two-dimensional tree for {dim}-dimensional keys"
                )))
            }
            Backend::List => Frontier::List(NdList::new(false)),
            Backend::SortedList => Frontier::List(NdList::new(true)),
            Backend::Scalar if dim == 1 => Frontier::Scalar(ScalarFrontier::new()),
            Backend::Scalar => {
                return Err(Error::InvalidUse(format!(
                    "scalar frontier for {dim}-dimensional keys"
                )))
            }
        })
    }

    #[inline]
    pub fn check(&self, b: &[u64], counter: &mut OpCounter) -> bool {
        match self {
            Frontier::Tree(t) => t.check(b, counter),
            Frontier::Tree2d(t) => t.check_2d_path(b, counter),
            Frontier::List(l) => l.check(b, counter),
            Frontier::Scalar(s) => s.check(b[0], counter),
        }
    }

    #[inline]
    pub fn update(&mut self, b: &[u64], counter: &mut OpCounter) {
        match self {
            Frontier::Tree(t) | Frontier::Tree2d(t) => t.update(b, counter),
            Frontier::List(l) => l.update(b, counter),
            Frontier::Scalar(s) => s.update(b[0]),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Frontier::Tree(t) | Frontier::Tree2d(t) => t.len(),
            Frontier::List(l) => l.len(),
            Frontier::Scalar(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn audit(&self) -> std::result::Result<(), String> {
        match self {
            Frontier::Tree(t) | Frontier::Tree2d(t) => t.audit(),
            Frontier::List(l) => l.audit(),
            Frontier::Scalar(_) => Ok(()),
        }
    }
}
