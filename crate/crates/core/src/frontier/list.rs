use crate::vector::{dominates, leq, lex_less, ProjectedVector};

use super::OpCounter;

/// Non-dominated list, either in insertion order or kept lexicographically
/// sorted (min first).
#[derive(Clone, Debug)]
pub struct NdList {
    entries: Vec<ProjectedVector>,
    sorted: bool,
}

impl NdList {
    pub fn new(sorted: bool) -> Self {
        NdList {
            entries: Vec::new(),
            sorted,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_sorted(&self) -> bool {
        self.sorted
    }

    pub fn entries(&self) -> &[ProjectedVector] {
        &self.entries
    }

    /// Linear scan in storage order, stopping at the first entry `<= b`.
    pub fn check(&self, b: &[u64], counter: &mut OpCounter) -> bool {
        for e in &self.entries {
            counter.dominance_checks += 1;
            if leq(e, b) {
                return true;
            }
        }
        false
    }

    /// Computes ND(entries + {b}); `b` must not be dominated by an entry.
    pub fn update(&mut self, b: &[u64], counter: &mut OpCounter) {
        if !self.sorted {
            self.entries.retain(|e| {
                counter.dominance_checks += 1;
                !dominates(b, e)
            });
            self.entries.push(ProjectedVector::from_slice(b));
            return;
        }
        // Walk down from the lexicographic maximum; entries below b cannot
        // be dominated by it.
        let mut pos = self.entries.len();
        while pos > 0 && !lex_less(&self.entries[pos - 1], b) {
            pos -= 1;
        }
        let tail: Vec<ProjectedVector> = self
            .entries
            .drain(pos..)
            .filter(|e| {
                counter.dominance_checks += 1;
                debug_assert_ne!(e.as_slice(), b, "update key already stored");
                !dominates(b, e)
            })
            .collect();
        self.entries.push(ProjectedVector::from_slice(b));
        self.entries.extend(tail);
    }

    pub fn audit(&self) -> Result<(), String> {
        for (i, a) in self.entries.iter().enumerate() {
            for b in &self.entries[i + 1..] {
                if leq(a, b) || leq(b, a) {
                    return Err(format!("entries {a} and {b} are comparable"));
                }
            }
        }
        if self.sorted {
            if let Some(w) = self.entries.windows(2).find(|w| !lex_less(&w[0], &w[1])) {
                return Err(format!("entries {} and {} out of order", w[0], w[1]));
            }
        }
        Ok(())
    }
}
