//! AVL tree over pairwise non-dominated keys, ordered lexicographically.
//!
//! Nodes live in a per-tree arena and refer to each other by index. Heights
//! follow the edge-count convention: a leaf has height 0, a missing child -1.
//!
//! Removing dominated keys can empty whole subtrees at once, so subtrees are
//! re-assembled with an AVL `join` (which handles arbitrary height gaps)
//! rather than with single-step rotations.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::vector::{leq, lex_cmp, lex_less, ProjectedVector};

use super::OpCounter;

const NIL: u32 = u32::MAX;

/// `(key <= b, b <lex key)` in a single pass over the components.
#[inline(always)]
fn leq_and_lex(key: &[u64], b: &[u64]) -> (bool, bool) {
    debug_assert_eq!(key.len(), b.len());
    let mut i = 0;
    while i < key.len() && key[i] == b[i] {
        i += 1;
    }
    if i == key.len() {
        return (true, false);
    }
    if b[i] < key[i] {
        return (false, true);
    }
    let rest = key[i + 1..].iter().zip(&b[i + 1..]).all(|(x, y)| x <= y);
    (rest, false)
}

/// `(b >lex key, b dominates key)` in a single pass; `b` dominating `key`
/// implies `b <lex key`.
#[inline(always)]
fn lex_greater_and_dominates(b: &[u64], key: &[u64]) -> (bool, bool) {
    let mut i = 0;
    while i < key.len() && key[i] == b[i] {
        i += 1;
    }
    debug_assert!(i < key.len(), "filter key already stored");
    if i == key.len() || b[i] > key[i] {
        return (i < key.len(), false);
    }
    let rest = b[i + 1..].iter().zip(&key[i + 1..]).all(|(x, y)| x <= y);
    (false, rest)
}

#[derive(Clone, Debug)]
pub struct NdTree {
    /// One record of `dim + 1` words per node slot: the child links packed
    /// as `left | right << 32`, then the key.
    slots: Vec<u64>,
    heights: Vec<i32>,
    free: Vec<u32>,
    root: u32,
    len: usize,
    dim: usize,
}

impl NdTree {
    pub fn new(dim: usize) -> Self {
        NdTree {
            slots: Vec::new(),
            heights: Vec::new(),
            free: Vec::new(),
            root: NIL,
            len: 0,
            dim,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Height of the root; -1 when empty.
    pub fn height(&self) -> i32 {
        self.h(self.root)
    }

    /// Is some stored key componentwise `<= b`?
    pub fn check(&self, b: &[u64], counter: &mut OpCounter) -> bool {
        assert_eq!(b.len(), self.dim, "dimension mismatch");
        match self.dim {
            2 => self.check_fixed::<2>(b, counter),
            3 => self.check_fixed::<3>(b, counter),
            4 => self.check_fixed::<4>(b, counter),
            5 => self.check_fixed::<5>(b, counter),
            _ => self.walk(counter, |n| leq_and_lex(self.key(n), b)),
        }
    }

    /// [`walk`](Self::walk) specialised to a fixed key width.
    fn check_fixed<const D: usize>(&self, b: &[u64], counter: &mut OpCounter) -> bool {
        let b: [u64; D] = b.try_into().expect("dimension checked");
        let stride = D + 1;
        let mut pending = [NIL; 64];
        let mut top = 0usize;
        let mut visits = 0u64;
        let mut n = self.root;
        let found = 'walk: loop {
            while n != NIL {
                visits += 1;
                let rec = &self.slots[n as usize * stride..][..stride];
                let mut above = 0u64;
                let mut less = false;
                for i in (0..D).rev() {
                    let k = rec[i + 1];
                    above |= u64::from(k > b[i]);
                    less = (b[i] < k) | ((b[i] == k) & less);
                }
                if above == 0 {
                    break 'walk true;
                }
                let right = (rec[0] >> 32) as u32;
                debug_assert!(top < pending.len());
                pending[top & 63] = right;
                top += usize::from(!less & (right != NIL));
                n = rec[0] as u32;
            }
            if top == 0 {
                break false;
            }
            top -= 1;
            n = pending[top & 63];
        };
        counter.nodes_visited += visits;
        counter.dominance_checks += visits;
        found
    }

    /// Pre-order walk (node, left subtree, right subtree) that skips the
    /// right subtree whenever `b <lex key`. `probe(n)` returns
    /// `(key <= b, b <lex key)`.
    #[inline(always)]
    fn walk(&self, counter: &mut OpCounter, probe: impl Fn(u32) -> (bool, bool)) -> bool {
        // AVL height stays below 64 for any addressable node count
        let mut pending = [NIL; 64];
        let mut top = 0usize;
        let mut visits = 0u64;
        let mut n = self.root;
        let found = 'walk: loop {
            while n != NIL {
                visits += 1;
                let (left, right) = self.links(n);
                let (covers, left_only) = probe(n);
                if covers {
                    break 'walk true;
                }
                pending[top] = right;
                top += usize::from(!left_only & (right != NIL));
                n = left;
            }
            if top == 0 {
                break false;
            }
            top -= 1;
            n = pending[top];
        };
        counter.nodes_visited += visits;
        counter.dominance_checks += visits;
        found
    }

    /// Same answer as [`check`](Self::check) for two-dimensional keys, but
    /// follows a single root-to-leaf path: when `b` is lexicographically
    /// greater than a key that is not `<= b`, no key in the left subtree can
    /// be `<= b` either.
    pub fn check_2d(&self, b: &[u64], counter: &mut OpCounter) -> Result<bool> {
        if self.dim != 2 || b.len() != 2 {
            return Err(Error::InvalidUse(format!(
                "two-dimensional check on {}-dimensional keys",
                self.dim
            )));
        }
        Ok(self.check_2d_path(b, counter))
    }

    pub(crate) fn check_2d_path(&self, b: &[u64], counter: &mut OpCounter) -> bool {
        let mut n = self.root;
        while n != NIL {
            let (left_child, right_child) = self.links(n);
            counter.nodes_visited += 1;
            counter.dominance_checks += 1;
            let (covers, left) = leq_and_lex(self.key(n), b);
            if covers {
                return true;
            }
            n = if left { left_child } else { right_child };
        }
        false
    }

    /// Removes every key dominated by `b`.
    ///
    /// `b` must not be dominated by or equal to a stored key.
    pub fn filter(&mut self, b: &[u64], counter: &mut OpCounter) {
        assert_eq!(b.len(), self.dim, "dimension mismatch");
        self.root = self.filter_at(self.root, b, counter).0;
    }

    /// Returns the new subtree root and whether anything below changed.
    fn filter_at(&mut self, n: u32, b: &[u64], counter: &mut OpCounter) -> (u32, bool) {
        if n == NIL {
            return (NIL, false);
        }
        counter.nodes_visited += 1;
        let (left, right) = self.links(n);
        let (greater, dominated) = lex_greater_and_dominates(b, self.key(n));
        // keys on the left are lexicographically smaller than b when b >lex key
        let (l, left_changed) = if greater {
            (left, false)
        } else {
            self.filter_at(left, b, counter)
        };
        let (r, right_changed) = self.filter_at(right, b, counter);
        counter.dominance_checks += 1;
        if dominated {
            self.release(n);
            (self.join2(l, r), true)
        } else if left_changed || right_changed {
            (self.join(l, n, r), true)
        } else {
            (n, false)
        }
    }

    /// Plain AVL insertion. Returns false (and leaves the tree unchanged) if
    /// `b` is already stored.
    pub fn insert(&mut self, b: &[u64]) -> bool {
        debug_assert_eq!(b.len(), self.dim);
        let mut inserted = false;
        self.root = self.insert_at(self.root, b, &mut inserted);
        if inserted {
            self.len += 1;
        }
        inserted
    }

    fn insert_at(&mut self, n: u32, b: &[u64], inserted: &mut bool) -> u32 {
        if n == NIL {
            *inserted = true;
            return self.alloc(b);
        }
        match lex_cmp(b, self.key(n)) {
            Ordering::Less => {
                let l = self.insert_at(self.left(n), b, inserted);
                self.set_left(n, l);
            }
            Ordering::Greater => {
                let r = self.insert_at(self.right(n), b, inserted);
                self.set_right(n, r);
            }
            Ordering::Equal => {
                debug_assert!(false, "duplicate key inserted");
                return n;
            }
        }
        self.rebalance(n)
    }

    /// Computes ND(keys + {b}); `b` must not be dominated by a stored key.
    pub fn update(&mut self, b: &[u64], counter: &mut OpCounter) {
        self.filter(b, counter);
        self.insert(b);
    }

    /// Keys in lexicographic order.
    pub fn keys(&self) -> Vec<ProjectedVector> {
        let mut out = Vec::with_capacity(self.len);
        let mut stack = Vec::new();
        let mut n = self.root;
        while n != NIL || !stack.is_empty() {
            while n != NIL {
                stack.push(n);
                n = self.left(n);
            }
            let top = stack.pop().expect("stack non-empty");
            out.push(ProjectedVector::from_slice(self.key(top)));
            n = self.right(top);
        }
        out
    }

    /// Full structural audit: stored heights, AVL balance, strict BST order,
    /// size, and pairwise non-dominance of keys.
    pub fn audit(&self) -> std::result::Result<(), String> {
        self.audit_shape()?;
        let keys = self.keys();
        for (i, a) in keys.iter().enumerate() {
            for b in &keys[i + 1..] {
                if leq(a, b) || leq(b, a) {
                    return Err(format!("keys {a} and {b} are comparable"));
                }
            }
        }
        Ok(())
    }

    /// Audit without the quadratic dominance scan.
    pub fn audit_shape(&self) -> std::result::Result<(), String> {
        let mut count = 0;
        self.audit_at(self.root, &mut count)?;
        if count != self.len {
            return Err(format!("size is {} but {count} nodes reachable", self.len));
        }
        let keys = self.keys();
        if let Some(w) = keys.windows(2).find(|w| !lex_less(&w[0], &w[1])) {
            return Err(format!("in-order keys {} and {} out of order", w[0], w[1]));
        }
        Ok(())
    }

    fn audit_at(&self, n: u32, count: &mut usize) -> std::result::Result<i32, String> {
        if n == NIL {
            return Ok(-1);
        }
        *count += 1;
        let (left, right) = self.links(n);
        let height = self.heights[n as usize];
        let hl = self.audit_at(left, count)?;
        let hr = self.audit_at(right, count)?;
        if height != 1 + hl.max(hr) {
            return Err(format!(
                "node {:?} stores height {} but has {}",
                self.key(n),
                height,
                1 + hl.max(hr)
            ));
        }
        if (hl - hr).abs() > 1 {
            return Err(format!("node {:?} unbalanced: {hl} vs {hr}", self.key(n)));
        }
        Ok(height)
    }

    #[inline]
    fn key(&self, n: u32) -> &[u64] {
        let at = n as usize * (self.dim + 1) + 1;
        &self.slots[at..at + self.dim]
    }

    #[inline]
    fn links(&self, n: u32) -> (u32, u32) {
        let w = self.slots[n as usize * (self.dim + 1)];
        (w as u32, (w >> 32) as u32)
    }

    fn left(&self, n: u32) -> u32 {
        self.links(n).0
    }

    fn right(&self, n: u32) -> u32 {
        self.links(n).1
    }

    fn set_links(&mut self, n: u32, left: u32, right: u32) {
        self.slots[n as usize * (self.dim + 1)] = u64::from(left) | u64::from(right) << 32;
    }

    fn set_left(&mut self, n: u32, left: u32) {
        let right = self.right(n);
        self.set_links(n, left, right);
    }

    fn set_right(&mut self, n: u32, right: u32) {
        let left = self.left(n);
        self.set_links(n, left, right);
    }

    fn h(&self, n: u32) -> i32 {
        if n == NIL {
            -1
        } else {
            self.heights[n as usize]
        }
    }

    fn alloc(&mut self, key: &[u64]) -> u32 {
        let n = match self.free.pop() {
            Some(i) => {
                self.heights[i as usize] = 0;
                i
            }
            None => {
                self.slots.resize(self.slots.len() + self.dim + 1, 0);
                self.heights.push(0);
                (self.heights.len() - 1) as u32
            }
        };
        self.set_links(n, NIL, NIL);
        let at = n as usize * (self.dim + 1) + 1;
        self.slots[at..at + self.dim].copy_from_slice(key);
        n
    }

    fn release(&mut self, n: u32) {
        self.free.push(n);
        self.len -= 1;
    }

    fn fix_height(&mut self, n: u32) {
        let (left, right) = self.links(n);
        let h = 1 + self.h(left).max(self.h(right));
        self.heights[n as usize] = h;
    }

    fn attach(&mut self, left: u32, n: u32, right: u32) -> u32 {
        self.set_links(n, left, right);
        self.fix_height(n);
        n
    }

    fn rotate_left(&mut self, n: u32) -> u32 {
        let r = self.right(n);
        self.set_right(n, self.left(r));
        self.set_left(r, n);
        self.fix_height(n);
        self.fix_height(r);
        r
    }

    fn rotate_right(&mut self, n: u32) -> u32 {
        let l = self.left(n);
        self.set_left(n, self.right(l));
        self.set_right(l, n);
        self.fix_height(n);
        self.fix_height(l);
        l
    }

    /// Single or double rotation for a height gap of at most two.
    fn rebalance(&mut self, n: u32) -> u32 {
        self.fix_height(n);
        let (left, right) = self.links(n);
        let d = self.h(left) - self.h(right);
        if d > 1 {
            let ll = self.left(left);
            let lr = self.right(left);
            if self.h(ll) < self.h(lr) {
                let l = self.rotate_left(left);
                self.set_left(n, l);
            }
            self.rotate_right(n)
        } else if d < -1 {
            let rl = self.left(right);
            let rr = self.right(right);
            if self.h(rr) < self.h(rl) {
                let r = self.rotate_right(right);
                self.set_right(n, r);
            }
            self.rotate_left(n)
        } else {
            n
        }
    }

    /// Joins balanced trees `left < mid < right` into one balanced tree.
    fn join(&mut self, left: u32, mid: u32, right: u32) -> u32 {
        let (hl, hr) = (self.h(left), self.h(right));
        if hl > hr + 1 {
            self.join_right(left, mid, right)
        } else if hr > hl + 1 {
            self.join_left(left, mid, right)
        } else {
            self.attach(left, mid, right)
        }
    }

    // `tall` is higher than `short` by at least two.
    fn join_right(&mut self, tall: u32, mid: u32, short: u32) -> u32 {
        let (l, c) = self.links(tall);
        if self.h(c) <= self.h(short) + 1 {
            let t = self.attach(c, mid, short);
            if self.h(t) <= self.h(l) + 1 {
                self.attach(l, tall, t)
            } else {
                let t = self.rotate_right(t);
                let top = self.attach(l, tall, t);
                self.rotate_left(top)
            }
        } else {
            let t = self.join_right(c, mid, short);
            let top = self.attach(l, tall, t);
            if self.h(t) <= self.h(l) + 1 {
                top
            } else {
                self.rotate_left(top)
            }
        }
    }

    fn join_left(&mut self, short: u32, mid: u32, tall: u32) -> u32 {
        let (c, r) = self.links(tall);
        if self.h(c) <= self.h(short) + 1 {
            let t = self.attach(short, mid, c);
            if self.h(t) <= self.h(r) + 1 {
                self.attach(t, tall, r)
            } else {
                let t = self.rotate_left(t);
                let top = self.attach(t, tall, r);
                self.rotate_right(top)
            }
        } else {
            let t = self.join_left(short, mid, c);
            let top = self.attach(t, tall, r);
            if self.h(t) <= self.h(r) + 1 {
                top
            } else {
                self.rotate_right(top)
            }
        }
    }

    /// Joins `left < right` by promoting the in-order successor.
    fn join2(&mut self, left: u32, right: u32) -> u32 {
        if right == NIL {
            return left;
        }
        if left == NIL {
            return right;
        }
        let (rest, min) = self.detach_min(right);
        self.join(left, min, rest)
    }

    fn detach_min(&mut self, n: u32) -> (u32, u32) {
        let (left, right) = self.links(n);
        if left == NIL {
            return (right, n);
        }
        let (rest, min) = self.detach_min(left);
        (self.join(rest, n, right), min)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig1_keys() -> Vec<Vec<u64>> {
        vec![
            vec![7, 9, 9],
            vec![9, 9, 7],
            vec![9, 10, 5],
            vec![10, 4, 10],
            vec![12, 9, 4],
        ]
    }

    fn tree_of(keys: &[Vec<u64>]) -> NdTree {
        let mut t = NdTree::new(keys[0].len());
        for k in keys {
            assert!(t.insert(k));
        }
        t
    }

    fn slices(keys: &[ProjectedVector]) -> Vec<Vec<u64>> {
        keys.iter().map(|k| k.to_vec()).collect()
    }

    #[test]
    fn check_figure_one() {
        let t = tree_of(&fig1_keys());
        let mut c = OpCounter::default();
        assert!(t.check(&[9, 9, 9], &mut c));
        assert!(c.dominance_checks >= 1);
    }

    #[test]
    fn empty_tree_checks_false() {
        let t = NdTree::new(3);
        let mut c = OpCounter::default();
        assert!(!t.check(&[0, 0, 0], &mut c));
        assert_eq!(c.dominance_checks, 0);
        assert_eq!(t.height(), -1);
    }

    #[test]
    fn check_2d_examples() {
        let t = tree_of(&[vec![3, 7], vec![5, 5], vec![7, 3]]);
        let mut c = OpCounter::default();
        assert!(t.check_2d(&[6, 6], &mut c).unwrap());
        assert!(!t.check_2d(&[2, 2], &mut c).unwrap());
        for k in [[3, 7], [5, 5], [7, 3]] {
            assert!(t.check_2d(&k, &mut c).unwrap());
        }
        assert!(matches!(
            tree_of(&fig1_keys()).check_2d(&[1, 1], &mut c),
            Err(Error::InvalidUse(_))
        ));
    }

    #[test]
    fn filter_figure_one() {
        let mut t = tree_of(&fig1_keys());
        let mut c = OpCounter::default();
        t.filter(&[9, 9, 5], &mut c);
        assert_eq!(
            slices(&t.keys()),
            vec![vec![7, 9, 9], vec![10, 4, 10], vec![12, 9, 4]]
        );
        t.audit().unwrap();
    }

    #[test]
    fn filter_incomparable_leaves_tree() {
        let mut t = tree_of(&[vec![3, 7]]);
        t.filter(&[7, 3], &mut OpCounter::default());
        assert_eq!(slices(&t.keys()), vec![vec![3, 7]]);
    }

    #[test]
    fn filter_everything() {
        let mut t = tree_of(&fig1_keys());
        t.filter(&[0, 0, 0], &mut OpCounter::default());
        assert!(t.is_empty());
        assert_eq!(t.height(), -1);
        // freed slots are reused
        t.insert(&[1, 1, 1]);
        assert_eq!(t.heights.len(), 5);
    }

    #[test]
    fn insert_examples() {
        let mut t = NdTree::new(2);
        t.insert(&[5, 5]);
        assert_eq!(t.height(), 0);
        assert_eq!(t.len(), 1);

        let mut t = NdTree::new(2);
        for i in 0..7u64 {
            t.insert(&[i, 10 - i]);
        }
        assert!(t.height() <= 3);
        t.audit().unwrap();
    }

    #[test]
    fn insertion_order_does_not_change_in_order_keys() {
        let keys = fig1_keys();
        let mut sorted = keys.clone();
        sorted.sort();
        // all 120 permutations of the five keys
        let mut idx = [0usize, 1, 2, 3, 4];
        let mut permutations = vec![idx];
        // Heap's algorithm
        let mut c = [0usize; 5];
        let mut i = 0;
        while i < 5 {
            if c[i] < i {
                if i % 2 == 0 {
                    idx.swap(0, i);
                } else {
                    idx.swap(c[i], i);
                }
                permutations.push(idx);
                c[i] += 1;
                i = 0;
            } else {
                c[i] = 0;
                i += 1;
            }
        }
        assert_eq!(permutations.len(), 120);
        for p in permutations {
            let ordered: Vec<Vec<u64>> = p.iter().map(|&i| keys[i].clone()).collect();
            let t = tree_of(&ordered);
            assert_eq!(slices(&t.keys()), sorted);
            t.audit().unwrap();
        }
    }

    #[test]
    fn update_examples() {
        let mut t = tree_of(&[vec![3, 7], vec![5, 5]]);
        t.update(&[4, 4], &mut OpCounter::default());
        assert_eq!(slices(&t.keys()), vec![vec![3, 7], vec![4, 4]]);

        let mut t = NdTree::new(2);
        t.update(&[1, 2], &mut OpCounter::default());
        assert_eq!(slices(&t.keys()), vec![vec![1, 2]]);

        let mut t = tree_of(&[vec![2, 9], vec![9, 2]]);
        t.update(&[5, 5], &mut OpCounter::default());
        assert_eq!(slices(&t.keys()), vec![vec![2, 9], vec![5, 5], vec![9, 2]]);
    }

    #[test]
    #[cfg(debug_assertions)]
    #[should_panic(expected = "duplicate key")]
    fn duplicate_insert_asserts() {
        let mut t = tree_of(&[vec![1, 2]]);
        t.insert(&[1, 2]);
    }

    #[test]
    fn bulk_deletion_from_one_side_stays_balanced() {
        // a long staircase, then remove a prefix that spans many subtrees
        let mut t = NdTree::new(2);
        for i in 0..200u64 {
            t.insert(&[2 * i + 10, 1000 - 2 * i]);
        }
        // removes i in 45..=100
        t.update(&[100, 800], &mut OpCounter::default());
        t.audit().unwrap();
        assert_eq!(t.len(), 200 - 56 + 1);
        let mut t2 = NdTree::new(2);
        for i in 0..200u64 {
            t2.insert(&[2 * i + 10, 1000 - 2 * i]);
        }
        t2.update(&[11, 1], &mut OpCounter::default());
        t2.audit().unwrap();
        assert_eq!(t2.len(), 2);
    }
}
