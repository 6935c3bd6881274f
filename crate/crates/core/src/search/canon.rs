//! Relabeling-invariant canonical forms.

use crate::algebra::{element_signature, Algebra, Elem};
use crate::error::{Error, Result};

/// Largest carrier accepted by [`canonical_form`].
pub const CANON_LIMIT: usize = 9;

/// Table bytes in comparison order: meet row-major, then join row-major.
pub fn table_bytes(a: &Algebra) -> Vec<u8> {
    a.table(crate::algebra::Op::Meet)
        .iter()
        .chain(a.table(crate::algebra::Op::Join))
        .map(|&v| v as u8)
        .collect()
}

/// Colour refinement seeded with the element signatures. Returns dense
/// colours; equal colours are necessary for elements to be swapped by an
/// automorphism.
pub(crate) fn refined_colors(a: &Algebra) -> Vec<usize> {
    let n = a.size();
    // larger signatures first, so a bottom element (absorbing every meet)
    // is placed at 0
    let sigs: Vec<_> = (0..n).map(|x| std::cmp::Reverse(element_signature(a, x))).collect();
    let mut colors = densify(&sigs);
    loop {
        let keys: Vec<(usize, Vec<[usize; 5]>)> = (0..n)
            .map(|x| {
                let mut row: Vec<[usize; 5]> = (0..n)
                    .map(|y| {
                        [
                            colors[y],
                            colors[a.meet(x, y)],
                            colors[a.meet(y, x)],
                            colors[a.join(x, y)],
                            colors[a.join(y, x)],
                        ]
                    })
                    .collect();
                row.sort_unstable();
                (colors[x], row)
            })
            .collect();
        let next = densify(&keys);
        let before = colors.iter().max().map_or(0, |m| m + 1);
        let after = next.iter().max().map_or(0, |m| m + 1);
        colors = next;
        if after == before {
            return colors;
        }
    }
}

fn densify<T: Ord + Clone>(keys: &[T]) -> Vec<usize> {
    let mut sorted: Vec<T> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter().map(|k| sorted.binary_search(k).unwrap()).collect()
}

struct Canon<'a> {
    a: &'a Algebra,
    n: usize,
    /// Colour required at each new position.
    slot_color: Vec<usize>,
    colors: Vec<usize>,
    /// New position to old element.
    order: Vec<Elem>,
    /// Old element to new position, `usize::MAX` when unplaced.
    label: Vec<usize>,
    best: Option<Vec<u8>>,
    best_perm: Vec<Elem>,
}

impl Canon<'_> {
    fn value(&self, table: usize, i: usize, j: usize) -> usize {
        let (x, y) = (self.order[i], self.order[j]);
        let v = if table == 0 { self.a.meet(x, y) } else { self.a.join(x, y) };
        self.label[v]
    }

    /// Compares the fully placed candidate with the best so far.
    fn leaf(&mut self) {
        let n = self.n;
        let Some(best) = &self.best else {
            self.take();
            return;
        };
        let mut k = 0;
        for t in 0..2 {
            for i in 0..n {
                for j in 0..n {
                    let v = self.value(t, i, j) as u8;
                    match v.cmp(&best[k]) {
                        std::cmp::Ordering::Less => {
                            self.take();
                            return;
                        }
                        std::cmp::Ordering::Greater => return,
                        std::cmp::Ordering::Equal => {}
                    }
                    k += 1;
                }
            }
        }
    }

    fn take(&mut self) {
        let n = self.n;
        let mut bytes = Vec::with_capacity(2 * n * n);
        for t in 0..2 {
            for i in 0..n {
                for j in 0..n {
                    bytes.push(self.value(t, i, j) as u8);
                }
            }
        }
        self.best = Some(bytes);
        self.best_perm = self.label.clone();
    }

    /// With positions `0..k` placed, the meet row 0 prefix is known; prune
    /// when it already exceeds the best.
    fn dominated(&self, k: usize) -> bool {
        let Some(best) = &self.best else { return false };
        for j in 0..k {
            let v = self.value(0, 0, j);
            if v == usize::MAX {
                // unplaced results get labels >= k
                return (best[j] as usize) < k;
            }
            match (v as u8).cmp(&best[j]) {
                std::cmp::Ordering::Less => return false,
                std::cmp::Ordering::Greater => return true,
                std::cmp::Ordering::Equal => {}
            }
        }
        false
    }

    fn place(&mut self, k: usize) {
        if k == self.n {
            self.leaf();
            return;
        }
        for x in 0..self.n {
            if self.label[x] != usize::MAX || self.colors[x] != self.slot_color[k] {
                continue;
            }
            self.order[k] = x;
            self.label[x] = k;
            if !self.dominated(k + 1) {
                self.place(k + 1);
            }
            self.label[x] = usize::MAX;
        }
    }
}

/// The relabeling of `a` with the least table bytes among relabelings that
/// list elements by refined colour, with the permutation used (old to new).
pub fn canonical_labeling(a: &Algebra) -> Result<(Algebra, Vec<Elem>)> {
    let n = a.size();
    if n > CANON_LIMIT {
        return Err(Error::SizeLimit(n, CANON_LIMIT));
    }
    let colors = refined_colors(a);
    let mut slot_color = colors.clone();
    slot_color.sort_unstable();
    let mut c = Canon {
        a,
        n,
        slot_color,
        colors,
        order: vec![0; n],
        label: vec![usize::MAX; n],
        best: None,
        best_perm: Vec::new(),
    };
    c.place(0);
    let perm = c.best_perm;
    let mut out = a.relabel(&perm);
    if let Some(name) = a.name() {
        out = out.with_name(name);
    }
    Ok((out, perm))
}

pub fn canonical_form(a: &Algebra) -> Result<Algebra> {
    canonical_labeling(a).map(|(c, _)| c)
}
