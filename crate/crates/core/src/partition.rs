//! Equivalence partitions and binary relations on a finite carrier.

use std::fmt;

use crate::algebra::Elem;

/// A partition of `0..n` with block ids assigned in order of least element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    block_of: Vec<usize>,
    blocks: Vec<Vec<Elem>>,
}

impl Partition {
    /// Normalizes arbitrary labels into dense ids ordered by least element.
    pub fn from_labels(labels: &[usize]) -> Partition {
        let mut remap = std::collections::HashMap::new();
        let mut block_of = Vec::with_capacity(labels.len());
        let mut blocks: Vec<Vec<Elem>> = Vec::new();
        for (x, l) in labels.iter().enumerate() {
            let id = *remap.entry(l).or_insert_with(|| {
                blocks.push(Vec::new());
                blocks.len() - 1
            });
            block_of.push(id);
            blocks[id].push(x);
        }
        Partition { block_of, blocks }
    }

    pub fn from_blocks(n: usize, blocks: &[Vec<Elem>]) -> Partition {
        let mut labels = vec![usize::MAX; n];
        for (i, b) in blocks.iter().enumerate() {
            for &x in b {
                labels[x] = i;
            }
        }
        assert!(labels.iter().all(|&l| l != usize::MAX), "blocks must cover the carrier");
        Partition::from_labels(&labels)
    }

    pub fn discrete(n: usize) -> Partition {
        Partition::from_labels(&(0..n).collect::<Vec<_>>())
    }

    pub fn full(n: usize) -> Partition {
        Partition::from_labels(&vec![0; n])
    }

    /// Builds the partition of an equivalence relation. Returns `None` if
    /// the relation is not an equivalence.
    pub fn from_relation(rel: &Relation) -> Option<Partition> {
        if !rel.is_reflexive() || !rel.is_symmetric() || !rel.is_transitive() {
            return None;
        }
        let n = rel.size();
        let labels: Vec<usize> = (0..n)
            .map(|x| (0..n).find(|&y| rel.get(x, y)).unwrap())
            .collect();
        Some(Partition::from_labels(&labels))
    }

    pub fn size(&self) -> usize {
        self.block_of.len()
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_of(&self, x: Elem) -> usize {
        self.block_of[x]
    }

    pub fn labels(&self) -> &[usize] {
        &self.block_of
    }

    pub fn blocks(&self) -> &[Vec<Elem>] {
        &self.blocks
    }

    pub fn block(&self, id: usize) -> &[Elem] {
        &self.blocks[id]
    }

    pub fn same(&self, x: Elem, y: Elem) -> bool {
        self.block_of[x] == self.block_of[y]
    }

    pub fn is_discrete(&self) -> bool {
        self.blocks.len() == self.size()
    }

    /// Every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        self.blocks
            .iter()
            .all(|b| b.iter().all(|&x| other.same(b[0], x)))
    }

    pub fn intersect(&self, other: &Partition) -> Partition {
        let n = self.size();
        let labels: Vec<usize> = (0..n).map(|x| self.block_of[x] * n + other.block_of[x]).collect();
        Partition::from_labels(&labels)
    }

    /// Finest partition coarser than both.
    pub fn join(&self, other: &Partition) -> Partition {
        let mut uf = UnionFind::new(self.size());
        for p in [self, other] {
            for b in &p.blocks {
                for &x in &b[1..] {
                    uf.union(b[0], x);
                }
            }
        }
        uf.partition()
    }

    pub fn to_relation(&self) -> Relation {
        let n = self.size();
        let mut r = Relation::empty(n);
        for b in &self.blocks {
            for &x in b {
                for &y in b {
                    r.set(x, y, true);
                }
            }
        }
        r
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            let items: Vec<String> = b.iter().map(|x| x.to_string()).collect();
            write!(f, "{{{}}}", items.join(","))?;
        }
        f.write_str("}")
    }
}

/// Dense boolean relation matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Relation {
    n: usize,
    bits: Vec<bool>,
}

impl Relation {
    pub fn empty(n: usize) -> Relation {
        Relation { n, bits: vec![false; n * n] }
    }

    pub fn from_fn(n: usize, f: impl Fn(Elem, Elem) -> bool) -> Relation {
        let mut r = Relation::empty(n);
        for x in 0..n {
            for y in 0..n {
                r.bits[x * n + y] = f(x, y);
            }
        }
        r
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, x: Elem, y: Elem) -> bool {
        self.bits[x * self.n + y]
    }

    pub fn set(&mut self, x: Elem, y: Elem, v: bool) {
        self.bits[x * self.n + y] = v;
    }

    pub fn pairs(&self) -> Vec<(Elem, Elem)> {
        let n = self.n;
        (0..n)
            .flat_map(|x| (0..n).map(move |y| (x, y)))
            .filter(|&(x, y)| self.get(x, y))
            .collect()
    }

    /// `self ∘ other`: `x (self∘other) z` iff `x self y` and `y other z` for some `y`.
    pub fn compose(&self, other: &Relation) -> Relation {
        let n = self.n;
        Relation::from_fn(n, |x, z| (0..n).any(|y| self.get(x, y) && other.get(y, z)))
    }

    pub fn union(&self, other: &Relation) -> Relation {
        Relation::from_fn(self.n, |x, y| self.get(x, y) || other.get(x, y))
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.bits.iter().zip(&other.bits).all(|(&a, &b)| !a || b)
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.n).all(|x| self.get(x, x))
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|x| (0..self.n).all(|y| self.get(x, y) == self.get(y, x)))
    }

    pub fn is_antisymmetric(&self) -> bool {
        (0..self.n).all(|x| (0..self.n).all(|y| x == y || !(self.get(x, y) && self.get(y, x))))
    }

    pub fn is_transitive(&self) -> bool {
        self.compose(self).is_subset(self)
    }
}

/// Union-find with path halving; used for congruence closure.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> UnionFind {
        UnionFind { parent: (0..n).collect() }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns true if two distinct classes were merged.
    pub fn union(&mut self, x: usize, y: usize) -> bool {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx == ry {
            return false;
        }
        // keep the smaller index as root
        let (lo, hi) = if rx < ry { (rx, ry) } else { (ry, rx) };
        self.parent[hi] = lo;
        true
    }

    pub fn partition(&mut self) -> Partition {
        let labels: Vec<usize> = (0..self.parent.len()).map(|x| self.find(x)).collect();
        Partition::from_labels(&labels)
    }
}

/// All partitions of `0..n` in restricted-growth-string order.
pub fn all_partitions(n: usize) -> Vec<Partition> {
    fn rec(i: usize, n: usize, labels: &mut Vec<usize>, max: usize, out: &mut Vec<Partition>) {
        if i == n {
            out.push(Partition::from_labels(labels));
            return;
        }
        for l in 0..=max + 1 {
            labels.push(l);
            rec(i + 1, n, labels, max.max(l), out);
            labels.pop();
        }
    }
    if n == 0 {
        return vec![];
    }
    let mut out = Vec::new();
    let mut labels = vec![0];
    rec(1, n, &mut labels, 0, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_are_normalized_by_least_element() {
        let p = Partition::from_labels(&[7, 3, 7, 1]);
        assert_eq!(p.labels(), &[0, 1, 0, 2]);
        assert_eq!(p.blocks(), &[vec![0, 2], vec![1], vec![3]]);
        assert_eq!(p.to_string(), "{{0,2}, {1}, {3}}");
    }

    #[test]
    fn bell_numbers() {
        let counts: Vec<usize> = (1..=6).map(|n| all_partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 5, 15, 52, 203]);
    }

    #[test]
    fn join_and_meet_of_partitions() {
        let a = Partition::from_labels(&[0, 0, 1, 2]);
        let b = Partition::from_labels(&[0, 1, 1, 2]);
        assert_eq!(a.join(&b), Partition::from_labels(&[0, 0, 0, 1]));
        assert_eq!(a.intersect(&b), Partition::discrete(4));
        assert!(a.refines(&a.join(&b)));
        assert!(!a.refines(&b));
    }

    #[test]
    fn relation_round_trip() {
        let p = Partition::from_labels(&[0, 1, 0]);
        assert_eq!(Partition::from_relation(&p.to_relation()), Some(p));
        let mut r = Relation::empty(2);
        r.set(0, 0, true);
        assert_eq!(Partition::from_relation(&r), None);
    }
}
