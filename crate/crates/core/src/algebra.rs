//! Finite algebras with two binary operations, homomorphisms and
//! isomorphism search.
//!
//! Elements are dense indices `0..n`. Nothing about the tables is assumed at
//! construction time; the laws a table pair satisfies are decided by
//! [`crate::identities`].

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// An element of a carrier, i.e. an index in `0..n`.
pub type Elem = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Op {
    Meet,
    Join,
}

impl Op {
    pub fn dual(self) -> Op {
        match self {
            Op::Meet => Op::Join,
            Op::Join => Op::Meet,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Op::Meet => "^",
            Op::Join => "v",
        }
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Op::Meet => f.write_str("meet"),
            Op::Join => f.write_str("join"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DualKind {
    /// Swap argument order in both tables.
    Horizontal,
    /// Swap the meet and join tables.
    Vertical,
    /// Horizontal followed by vertical.
    Double,
}

/// A finite carrier with a meet table and a join table.
#[derive(Clone, Debug)]
pub struct Algebra {
    n: usize,
    meet: Vec<Elem>,
    join: Vec<Elem>,
    name: Option<String>,
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.meet == other.meet && self.join == other.join
    }
}

impl Eq for Algebra {}

impl std::hash::Hash for Algebra {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.meet.hash(state);
        self.join.hash(state);
    }
}

impl Algebra {
    /// Builds an algebra from two `n x n` tables given as rows.
    pub fn new(n: usize, meet: Vec<Vec<Elem>>, join: Vec<Vec<Elem>>) -> Result<Algebra> {
        if n == 0 {
            return Err(Error::BadShape("carrier must be nonempty".into()));
        }
        let flatten = |rows: Vec<Vec<Elem>>, what: &str| -> Result<Vec<Elem>> {
            if rows.len() != n {
                return Err(Error::BadShape(format!("{what} table has {} rows, expected {n}", rows.len())));
            }
            let mut flat = Vec::with_capacity(n * n);
            for (i, row) in rows.into_iter().enumerate() {
                if row.len() != n {
                    return Err(Error::BadShape(format!(
                        "{what} row {i} has {} entries, expected {n}",
                        row.len()
                    )));
                }
                flat.extend(row);
            }
            Ok(flat)
        };
        let meet = flatten(meet, "meet")?;
        let join = flatten(join, "join")?;
        Algebra::from_flat(n, meet, join)
    }

    /// Builds an algebra from row-major flat tables.
    pub fn from_flat(n: usize, meet: Vec<Elem>, join: Vec<Elem>) -> Result<Algebra> {
        if n == 0 {
            return Err(Error::BadShape("carrier must be nonempty".into()));
        }
        if meet.len() != n * n || join.len() != n * n {
            return Err(Error::BadShape(format!("tables must have {} entries", n * n)));
        }
        for table in [&meet, &join] {
            if let Some(pos) = table.iter().position(|&v| v >= n) {
                return Err(Error::OutOfRangeEntry { row: pos / n, col: pos % n, value: table[pos] });
            }
        }
        Ok(Algebra { n, meet, join, name: None })
    }

    pub fn from_fn(
        n: usize,
        meet: impl Fn(Elem, Elem) -> Elem,
        join: impl Fn(Elem, Elem) -> Elem,
    ) -> Result<Algebra> {
        let mut m = Vec::with_capacity(n * n);
        let mut j = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                m.push(meet(x, y));
                j.push(join(x, y));
            }
        }
        Algebra::from_flat(n, m, j)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Algebra {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.n
    }

    #[inline]
    pub fn meet(&self, x: Elem, y: Elem) -> Elem {
        self.meet[x * self.n + y]
    }

    #[inline]
    pub fn join(&self, x: Elem, y: Elem) -> Elem {
        self.join[x * self.n + y]
    }

    #[inline]
    pub fn op(&self, op: Op, x: Elem, y: Elem) -> Elem {
        match op {
            Op::Meet => self.meet(x, y),
            Op::Join => self.join(x, y),
        }
    }

    /// Bounds-checked table lookup.
    pub fn apply(&self, op: Op, x: Elem, y: Elem) -> Result<Elem> {
        for e in [x, y] {
            if e >= self.n {
                return Err(Error::IndexOutOfRange(e, self.n));
            }
        }
        Ok(self.op(op, x, y))
    }

    /// Row-major flat table of one operation.
    pub fn table(&self, op: Op) -> &[Elem] {
        match op {
            Op::Meet => &self.meet,
            Op::Join => &self.join,
        }
    }

    pub fn rows(&self, op: Op) -> Vec<Vec<Elem>> {
        self.table(op).chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn dualize(&self, kind: DualKind) -> Algebra {
        let n = self.n;
        let transpose = |t: &[Elem]| -> Vec<Elem> {
            let mut out = vec![0; n * n];
            for x in 0..n {
                for y in 0..n {
                    out[x * n + y] = t[y * n + x];
                }
            }
            out
        };
        let (meet, join) = match kind {
            DualKind::Horizontal => (transpose(&self.meet), transpose(&self.join)),
            DualKind::Vertical => (self.join.clone(), self.meet.clone()),
            DualKind::Double => (transpose(&self.join), transpose(&self.meet)),
        };
        Algebra { n, meet, join, name: None }
    }

    /// Relabels the carrier: element `x` becomes `perm[x]`.
    pub fn relabel(&self, perm: &[Elem]) -> Algebra {
        let n = self.n;
        assert_eq!(perm.len(), n, "permutation length must match carrier size");
        let mut meet = vec![0; n * n];
        let mut join = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                meet[perm[x] * n + perm[y]] = perm[self.meet(x, y)];
                join[perm[x] * n + perm[y]] = perm[self.join(x, y)];
            }
        }
        Algebra { n, meet, join, name: self.name.clone() }
    }

    /// True when `set` is closed under both operations.
    pub fn is_closed(&self, set: &[Elem]) -> bool {
        let mut member = vec![false; self.n];
        for &x in set {
            member[x] = true;
        }
        set.iter().all(|&x| {
            set.iter()
                .all(|&y| member[self.meet(x, y)] && member[self.join(x, y)])
        })
    }

    /// The subalgebra on a closed subset, relabeled `0..k` in increasing
    /// order of the original elements. Returns `None` if the subset is not
    /// closed or empty.
    pub fn restrict(&self, set: &[Elem]) -> Option<Algebra> {
        let mut elems = set.to_vec();
        elems.sort_unstable();
        elems.dedup();
        if elems.is_empty() || !self.is_closed(&elems) {
            return None;
        }
        let mut index = vec![usize::MAX; self.n];
        for (i, &x) in elems.iter().enumerate() {
            index[x] = i;
        }
        let k = elems.len();
        Algebra::from_fn(
            k,
            |i, j| index[self.meet(elems[i], elems[j])],
            |i, j| index[self.join(elems[i], elems[j])],
        )
        .ok()
    }

    /// Least superset of `seed` closed under both operations.
    pub fn subalgebra_closure(&self, seed: &[Elem]) -> BTreeSet<Elem> {
        let mut member = vec![false; self.n];
        let mut elems: Vec<Elem> = Vec::new();
        for &x in seed {
            if !member[x] {
                member[x] = true;
                elems.push(x);
            }
        }
        // every pair (i, j) with i, j < done has been combined
        let mut done = 0;
        while done < elems.len() {
            let cur = elems.len();
            for i in 0..cur {
                for j in 0..cur {
                    if i < done && j < done {
                        continue;
                    }
                    for v in [self.meet(elems[i], elems[j]), self.join(elems[i], elems[j])] {
                        if !member[v] {
                            member[v] = true;
                            elems.push(v);
                        }
                    }
                }
            }
            done = cur;
        }
        elems.into_iter().collect()
    }

    /// First pair `(x, y)` in lexicographic order at which `map` fails to
    /// preserve an operation, meet checked before join.
    pub fn homomorphism_violation(&self, target: &Algebra, map: &[Elem]) -> Option<(Op, Elem, Elem)> {
        for x in 0..self.n {
            for y in 0..self.n {
                for op in [Op::Meet, Op::Join] {
                    if map[self.op(op, x, y)] != target.op(op, map[x], map[y]) {
                        return Some((op, x, y));
                    }
                }
            }
        }
        None
    }

    pub fn is_homomorphism(&self, target: &Algebra, map: &[Elem]) -> bool {
        map.len() == self.n
            && map.iter().all(|&v| v < target.n)
            && self.homomorphism_violation(target, map).is_none()
    }
}

/// Verdict of [`is_homomorphism`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HomVerdict {
    Holds,
    Fails { op: Op, x: Elem, y: Elem },
}

/// Checks that `f` preserves both operations from `a` to `b`.
///
/// Panics if `f` is not a total map from `a`'s carrier into `b`'s.
pub fn is_homomorphism(f: &[Elem], a: &Algebra, b: &Algebra) -> HomVerdict {
    assert_eq!(f.len(), a.size(), "map must be total on the source carrier");
    assert!(f.iter().all(|&v| v < b.size()), "map leaves the target carrier");
    match a.homomorphism_violation(b, f) {
        None => HomVerdict::Holds,
        Some((op, x, y)) => HomVerdict::Fails { op, x, y },
    }
}

/// A verified homomorphism between two algebras.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    source: Algebra,
    target: Algebra,
    map: Vec<Elem>,
}

impl Morphism {
    pub fn new(source: Algebra, target: Algebra, map: Vec<Elem>) -> Result<Morphism> {
        if map.len() != source.size() {
            return Err(Error::BadShape(format!(
                "map has {} entries for a carrier of size {}",
                map.len(),
                source.size()
            )));
        }
        if let Some(&v) = map.iter().find(|&&v| v >= target.size()) {
            return Err(Error::IndexOutOfRange(v, target.size()));
        }
        if let Some((op, x, y)) = source.homomorphism_violation(&target, &map) {
            return Err(Error::NotAHomomorphism { op, x, y });
        }
        Ok(Morphism { source, target, map })
    }

    pub fn identity(a: &Algebra) -> Morphism {
        Morphism { source: a.clone(), target: a.clone(), map: (0..a.size()).collect() }
    }

    pub fn source(&self) -> &Algebra {
        &self.source
    }

    pub fn target(&self) -> &Algebra {
        &self.target
    }

    pub fn map(&self) -> &[Elem] {
        &self.map
    }

    pub fn apply(&self, x: Elem) -> Elem {
        self.map[x]
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Morphism) -> Result<Morphism> {
        if self.target != other.source {
            return Err(Error::TargetMismatch);
        }
        let map = self.map.iter().map(|&x| other.map[x]).collect();
        Ok(Morphism { source: self.source.clone(), target: other.target.clone(), map })
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.size()];
        self.map.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.target.size()];
        for &v in &self.map {
            seen[v] = true;
        }
        seen.into_iter().all(|s| s)
    }

    pub fn image(&self) -> BTreeSet<Elem> {
        self.map.iter().copied().collect()
    }
}

/// Per-element invariants preserved by every isomorphism.
pub(crate) fn element_signature(a: &Algebra, x: Elem) -> [usize; 8] {
    let n = a.size();
    let mut sig = [0usize; 8];
    sig[0] = usize::from(a.meet(x, x) == x);
    sig[1] = usize::from(a.join(x, x) == x);
    for y in 0..n {
        sig[2] += usize::from(a.meet(x, y) == a.meet(y, x));
        sig[3] += usize::from(a.join(x, y) == a.join(y, x));
        sig[4] += usize::from(a.meet(x, y) == x);
        sig[5] += usize::from(a.meet(y, x) == x);
        sig[6] += usize::from(a.join(x, y) == x);
        // size of x's D-class in the band sense
        sig[7] += usize::from(a.meet(a.meet(x, y), x) == x && a.meet(a.meet(y, x), y) == y);
    }
    sig
}

/// Searches for an isomorphism `a -> b`, returned as the image of each
/// element of `a`.
pub fn are_isomorphic(a: &Algebra, b: &Algebra) -> Option<Vec<Elem>> {
    let n = a.size();
    if n != b.size() {
        return None;
    }
    let sig_a: Vec<_> = (0..n).map(|x| element_signature(a, x)).collect();
    let sig_b: Vec<_> = (0..n).map(|x| element_signature(b, x)).collect();
    let mut sorted_a = sig_a.clone();
    let mut sorted_b = sig_b.clone();
    sorted_a.sort_unstable();
    sorted_b.sort_unstable();
    if sorted_a != sorted_b {
        return None;
    }

    struct Search<'a> {
        a: &'a Algebra,
        b: &'a Algebra,
        sig_a: Vec<[usize; 8]>,
        sig_b: Vec<[usize; 8]>,
        map: Vec<Option<Elem>>,
        used: Vec<bool>,
    }

    impl Search<'_> {
        fn consistent(&self, x: Elem) -> bool {
            let fx = self.map[x].unwrap();
            for y in 0..=x {
                let Some(fy) = self.map[y] else { continue };
                for op in [Op::Meet, Op::Join] {
                    for (p, q, fp, fq) in [(x, y, fx, fy), (y, x, fy, fx)] {
                        let v = self.a.op(op, p, q);
                        let w = self.b.op(op, fp, fq);
                        if let Some(fv) = self.map[v] {
                            if fv != w {
                                return false;
                            }
                        } else if self.used[w] {
                            return false;
                        }
                    }
                }
            }
            true
        }

        fn extend(&mut self, x: Elem) -> bool {
            let n = self.a.size();
            if x == n {
                return true;
            }
            for t in 0..n {
                if self.used[t] || self.sig_a[x] != self.sig_b[t] {
                    continue;
                }
                self.map[x] = Some(t);
                self.used[t] = true;
                if self.consistent(x) && self.extend(x + 1) {
                    return true;
                }
                self.map[x] = None;
                self.used[t] = false;
            }
            false
        }
    }

    let mut search = Search { a, b, sig_a, sig_b, map: vec![None; n], used: vec![false; n] };
    if search.extend(0) {
        let map: Vec<Elem> = search.map.into_iter().map(Option::unwrap).collect();
        debug_assert!(a.is_homomorphism(b, &map));
        Some(map)
    } else {
        None
    }
}
