//! Naive generate-and-filter oracle sharing no code with the search engine:
//! brute-force associativity, hand-written absorption laws and isomorphism
//! classes by trying every permutation.
#![allow(dead_code)]

pub mod golden;

use std::collections::BTreeSet;

use skewlat::{Algebra, Op};

pub type Table = Vec<usize>;

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn associative(n: usize, t: &Table) -> bool {
    let op = |x: usize, y: usize| t[x * n + y];
    (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| op(op(x, y), z) == op(x, op(y, z)))))
}

fn all_associative(n: usize) -> Vec<Table> {
    let cells = n * n;
    let total = n.pow(cells as u32);
    (0..total)
        .map(|mut code| {
            (0..cells)
                .map(|_| {
                    let v = code % n;
                    code /= n;
                    v
                })
                .collect::<Table>()
        })
        .filter(|t| associative(n, t))
        .collect()
}

fn absorptive(n: usize, m: &Table, j: &Table) -> bool {
    let meet = |x: usize, y: usize| m[x * n + y];
    let join = |x: usize, y: usize| j[x * n + y];
    (0..n).all(|x| {
        (0..n).all(|y| {
            join(meet(y, x), x) == x
                && meet(x, join(x, y)) == x
                && meet(join(y, x), x) == x
                && join(x, meet(x, y)) == x
        })
    })
}

fn commutative(n: usize, t: &Table) -> bool {
    (0..n).all(|x| (0..n).all(|y| t[x * n + y] == t[y * n + x]))
}

/// Least relabeled `(meet, join)` over all permutations.
fn brute_canon(n: usize, m: &Table, j: &Table, perms: &[Vec<usize>]) -> Vec<usize> {
    perms
        .iter()
        .map(|p| {
            let mut inv = vec![0; n];
            for (old, &new) in p.iter().enumerate() {
                inv[new] = old;
            }
            let mut bytes = Vec::with_capacity(2 * n * n);
            for t in [m, j] {
                for i in 0..n {
                    for k in 0..n {
                        bytes.push(p[t[inv[i] * n + inv[k]]]);
                    }
                }
            }
            bytes
        })
        .min()
        .unwrap()
}

/// Isomorphism classes of skew lattices (and of lattices) of size `n`.
pub fn oracle(n: usize) -> (BTreeSet<Vec<usize>>, BTreeSet<Vec<usize>>) {
    let perms = permutations(n);
    let semigroups = all_associative(n);
    let mut all = BTreeSet::new();
    let mut lattices = BTreeSet::new();
    for m in &semigroups {
        for j in &semigroups {
            if absorptive(n, m, j) {
                let c = brute_canon(n, m, j, &perms);
                if commutative(n, m) && commutative(n, j) {
                    lattices.insert(c.clone());
                }
                all.insert(c);
            }
        }
    }
    (all, lattices)
}

pub fn classes_of<'a>(n: usize, algebras: impl Iterator<Item = &'a Algebra>) -> BTreeSet<Vec<usize>> {
    let perms = permutations(n);
    algebras
        .map(|a| brute_canon(n, &a.table(Op::Meet).to_vec(), &a.table(Op::Join).to_vec(), &perms))
        .collect()
}
