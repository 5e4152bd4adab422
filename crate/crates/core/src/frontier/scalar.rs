use super::OpCounter;

/// Bi-objective frontier: only the smallest second objective seen so far.
#[derive(Clone, Copy, Debug, Default)]
pub struct ScalarFrontier {
    value: Option<u64>,
}

impl ScalarFrontier {
    pub fn new() -> Self {
        ScalarFrontier::default()
    }

    pub fn value(&self) -> Option<u64> {
        self.value
    }

    pub fn len(&self) -> usize {
        usize::from(self.value.is_some())
    }

    pub fn is_empty(&self) -> bool {
        self.value.is_none()
    }

    pub fn check(&self, b: u64, counter: &mut OpCounter) -> bool {
        match self.value {
            Some(v) => {
                counter.dominance_checks += 1;
                v <= b
            }
            None => false,
        }
    }

    /// Call only after [`check`](Self::check) returned false for `b`.
    pub fn update(&mut self, b: u64) {
        debug_assert!(
            self.value.is_none_or(|v| b < v),
            "scalar frontier must decrease"
        );
        self.value = Some(b);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn with(v: u64) -> ScalarFrontier {
        let mut f = ScalarFrontier::new();
        f.update(v);
        f
    }

    #[test]
    fn check_examples() {
        let mut c = OpCounter::default();
        assert!(with(5).check(7, &mut c));
        assert!(!ScalarFrontier::new().check(7, &mut c));
        assert!(!with(5).check(4, &mut c));
    }

    #[test]
    fn update_examples() {
        let mut f = with(5);
        f.update(3);
        assert_eq!(f.value(), Some(3));
        assert_eq!(with(9).value(), Some(9));

        let mut f = ScalarFrontier::new();
        let mut seen = Vec::new();
        for b in [20, 14, 14, 17, 9, 3, 3, 8] {
            if !f.check(b, &mut OpCounter::default()) {
                f.update(b);
                seen.push(b);
            }
        }
        assert_eq!(seen, vec![20, 14, 9, 3]);
        assert_eq!(f.len(), 1);
    }
}
