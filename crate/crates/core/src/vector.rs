//! Cost vectors and the comparison primitives every other module builds on.
//!
//! Per-edge components are validated to fit in 32 bits; accumulated path
//! costs are carried in 64 bits and every addition is checked.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Deref;

use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Up to six objectives are stored inline.
type Components = SmallVec<[u64; 6]>;

/// An M-component vector of non-negative integer costs.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CostVector(Components);

/// A cost vector with its first component removed.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjectedVector(Components);

impl CostVector {
    pub fn new(components: impl IntoIterator<Item = u64>) -> Self {
        CostVector(components.into_iter().collect())
    }

    pub fn zero(num_objectives: usize) -> Self {
        CostVector(SmallVec::from_elem(0, num_objectives))
    }

    /// Builds an edge cost, rejecting components that do not fit in 32 bits.
    pub fn edge(components: &[u64]) -> Result<Self> {
        if let Some(c) = components.iter().find(|&&c| c > u64::from(u32::MAX)) {
            return Err(Error::InvalidInstance(format!(
                "edge cost component {c} exceeds 32 bits"
            )));
        }
        Ok(CostVector::new(components.iter().copied()))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    /// Borrowed view of the projection; avoids the allocation of [`project`].
    pub fn tail(&self) -> &[u64] {
        &self.0[1..]
    }

    pub fn first(&self) -> u64 {
        self.0[0]
    }

    /// Appends one component, used when deriving extra objectives.
    pub fn push(&mut self, component: u64) {
        self.0.push(component);
    }
}

impl ProjectedVector {
    pub fn new(components: impl IntoIterator<Item = u64>) -> Self {
        ProjectedVector(components.into_iter().collect())
    }

    pub fn from_slice(components: &[u64]) -> Self {
        ProjectedVector(SmallVec::from_slice(components))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }
}

impl Deref for CostVector {
    type Target = [u64];
    fn deref(&self) -> &[u64] {
        &self.0
    }
}

impl Deref for ProjectedVector {
    type Target = [u64];
    fn deref(&self) -> &[u64] {
        &self.0
    }
}

impl From<Vec<u64>> for CostVector {
    fn from(v: Vec<u64>) -> Self {
        CostVector(SmallVec::from_vec(v))
    }
}

impl From<Vec<u64>> for ProjectedVector {
    fn from(v: Vec<u64>) -> Self {
        ProjectedVector(SmallVec::from_vec(v))
    }
}

fn write_tuple(f: &mut fmt::Formatter<'_>, components: &[u64]) -> fmt::Result {
    f.write_str("(")?;
    for (i, c) in components.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{c}")?;
    }
    f.write_str(")")
}

impl fmt::Display for CostVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.0)
    }
}

impl fmt::Debug for CostVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.0)
    }
}

impl fmt::Display for ProjectedVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.0)
    }
}

impl fmt::Debug for ProjectedVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.0)
    }
}

/// `a` dominates `b`: no component larger and at least one strictly smaller.
#[inline]
pub fn dominates(a: &[u64], b: &[u64]) -> bool {
    assert_eq!(a.len(), b.len(), "dimension mismatch");
    let mut strict = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        strict |= x < y;
    }
    strict
}

/// Componentwise `a <= b` (dominates or equal).
#[inline]
pub fn leq(a: &[u64], b: &[u64]) -> bool {
    assert_eq!(a.len(), b.len(), "dimension mismatch");
    a.iter().zip(b).all(|(x, y)| x <= y)
}

#[inline]
pub fn lex_cmp(a: &[u64], b: &[u64]) -> Ordering {
    assert_eq!(a.len(), b.len(), "dimension mismatch");
    a.cmp(b)
}

#[inline]
pub fn lex_less(a: &[u64], b: &[u64]) -> bool {
    lex_cmp(a, b) == Ordering::Less
}

/// Drops the first component.
pub fn project(v: &CostVector) -> Result<ProjectedVector> {
    if v.dim() < 2 {
        return Err(Error::InvalidInstance(format!(
            "projection needs at least 2 objectives, got {}",
            v.dim()
        )));
    }
    Ok(ProjectedVector::from_slice(v.tail()))
}

/// Componentwise checked sum.
pub fn vec_add(a: &CostVector, b: &CostVector) -> Result<CostVector> {
    assert_eq!(a.dim(), b.dim(), "dimension mismatch");
    let mut out = Components::with_capacity(a.dim());
    for (x, y) in a.iter().zip(b.iter()) {
        out.push(x.checked_add(*y).ok_or(Error::Overflow)?);
    }
    Ok(CostVector(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cv(v: &[u64]) -> CostVector {
        CostVector::new(v.iter().copied())
    }

    #[test]
    fn dominance_examples() {
        assert!(dominates(&[1, 2, 3], &[2, 2, 3]));
        assert!(!dominates(&[1, 2, 3], &[1, 2, 3]));
        assert!(dominates(&[9, 9, 7], &[9, 9, 9]));
    }

    #[test]
    fn leq_examples() {
        assert!(leq(&[9, 9, 7], &[9, 9, 9]));
        assert!(leq(&[1, 2], &[1, 2]));
        assert!(!leq(&[3, 1], &[1, 3]));
    }

    #[test]
    fn lex_examples() {
        assert!(lex_less(&[1, 9, 9], &[2, 0, 0]));
        assert!(!lex_less(&[1, 2, 3], &[1, 2, 3]));
        assert!(lex_less(&[9, 9, 7], &[9, 9, 9]));
    }

    #[test]
    #[should_panic(expected = "dimension mismatch")]
    fn mismatched_lengths_panic() {
        leq(&[1, 2], &[1, 2, 3]);
    }

    #[test]
    fn projection() {
        assert_eq!(project(&cv(&[13, 9, 9, 9])).unwrap().as_slice(), &[9, 9, 9]);
        assert_eq!(project(&cv(&[4, 11])).unwrap().as_slice(), &[11]);
        assert_eq!(
            project(&cv(&[7, 1, 2, 3, 4])).unwrap().as_slice(),
            &[1, 2, 3, 4]
        );
        assert!(matches!(project(&cv(&[3])), Err(Error::InvalidInstance(_))));
    }

    #[test]
    fn addition() {
        assert_eq!(vec_add(&cv(&[1, 2]), &cv(&[3, 4])).unwrap(), cv(&[4, 6]));
        assert_eq!(
            vec_add(&cv(&[5, 6, 7]), &CostVector::zero(3)).unwrap(),
            cv(&[5, 6, 7])
        );
        assert_eq!(
            vec_add(&cv(&[2, 3, 4]), &cv(&[1, 1, 1])).unwrap(),
            cv(&[3, 4, 5])
        );
        assert!(matches!(
            vec_add(&cv(&[u64::MAX, 0]), &cv(&[1, 0])),
            Err(Error::Overflow)
        ));
    }

    #[test]
    fn edge_costs_must_fit_32_bits() {
        assert!(CostVector::edge(&[1, u64::from(u32::MAX)]).is_ok());
        assert!(CostVector::edge(&[1, u64::from(u32::MAX) + 1]).is_err());
    }

    #[test]
    fn display_is_tuple() {
        assert_eq!(cv(&[2, 18]).to_string(), "(2,18)");
    }

    fn pair(dim: usize) -> impl Strategy<Value = (Vec<u64>, Vec<u64>)> {
        (
            prop::collection::vec(0u64..6, dim),
            prop::collection::vec(0u64..6, dim),
        )
    }

    proptest! {
        #[test]
        fn antisymmetry((a, b) in (2usize..6).prop_flat_map(pair)) {
            prop_assert!(!(dominates(&a, &b) && dominates(&b, &a)));
        }

        #[test]
        fn dominates_is_leq_and_distinct((a, b) in (2usize..6).prop_flat_map(pair)) {
            prop_assert_eq!(dominates(&a, &b), leq(&a, &b) && a != b);
        }

        #[test]
        fn lex_is_strict_total((a, b) in (2usize..6).prop_flat_map(pair)) {
            if a != b {
                prop_assert!(lex_less(&a, &b) ^ lex_less(&b, &a));
            } else {
                prop_assert!(!lex_less(&a, &b));
            }
        }

        #[test]
        fn projection_commutes_with_addition((a, b) in (2usize..6).prop_flat_map(pair)) {
            let (a, b) = (CostVector::from(a), CostVector::from(b));
            let lhs = project(&vec_add(&a, &b).unwrap()).unwrap();
            let rhs: Vec<u64> = project(&a).unwrap().iter()
                .zip(project(&b).unwrap().iter())
                .map(|(x, y)| x + y)
                .collect();
            prop_assert_eq!(lhs.as_slice(), rhs.as_slice());
        }
    }
}
