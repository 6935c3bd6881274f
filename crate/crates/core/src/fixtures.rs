//! Small named algebras used throughout the tests and documentation.
//!
//! Four-element fixtures use the labeling `0 = "0"`, `1 = "a"`, `2 = "b"`,
//! `3 = "1"`.

use crate::algebra::{Algebra, Elem};

/// Element names of the four-element fixtures.
pub const FOUR_NAMES: [&str; 4] = ["0", "a", "b", "1"];

/// The two-element chain `0 < 1`.
pub fn l2() -> Algebra {
    Algebra::from_fn(2, |x, y| x.min(y), |x, y| x.max(y))
        .unwrap()
        .with_name("L2")
}

/// Right rectangular pair: `x ^ y = y`, `x v y = x`.
pub fn rr2() -> Algebra {
    Algebra::from_fn(2, |_, y| y, |x, _| x).unwrap().with_name("RR2")
}

/// Left rectangular pair: `x ^ y = x`, `x v y = y`.
pub fn lr2() -> Algebra {
    Algebra::from_fn(2, |x, _| x, |_, y| y).unwrap().with_name("LR2")
}

/// The four-element Boolean lattice `0 < a, b < 1`.
pub fn m2() -> Algebra {
    // bit encoding: 0 = 00, a = 01, b = 10, 1 = 11
    Algebra::from_fn(4, |x, y| x & y, |x, y| x | y)
        .unwrap()
        .with_name("M2")
}

/// Right-handed skew chain `0 < {a, b} < 1` where `{a, b}` is a right
/// rectangular class.
pub fn f4r() -> Algebra {
    const BOTTOM: Elem = 0;
    const TOP: Elem = 3;
    let in_middle = |x: Elem| x == 1 || x == 2;
    let meet = |x: Elem, y: Elem| {
        if x == BOTTOM || y == BOTTOM {
            BOTTOM
        } else if x == TOP {
            y
        } else if y == TOP {
            x
        } else {
            debug_assert!(in_middle(x) && in_middle(y));
            y
        }
    };
    let join = |x: Elem, y: Elem| {
        if x == TOP || y == TOP {
            TOP
        } else if x == BOTTOM {
            y
        } else {
            x
        }
    };
    Algebra::from_fn(4, meet, join).unwrap().with_name("F4R")
}

/// The `n`-element chain `0 < 1 < ... < n-1`.
pub fn chain(n: usize) -> Algebra {
    Algebra::from_fn(n, |x, y| x.min(y), |x, y| x.max(y))
        .unwrap()
        .with_name(format!("C{n}"))
}

/// The trivial one-element algebra.
pub fn trivial() -> Algebra {
    Algebra::from_fn(1, |_, _| 0, |_, _| 0).unwrap().with_name("T1")
}

/// Rectangular skew lattice on `rows x cols`, element `(i, j)` encoded as
/// `i * cols + j`, with `(x, y) ^ (x', y') = (x, y')` and
/// `(x, y) v (x', y') = (x', y)`.
pub fn rectangular(rows: usize, cols: usize) -> Algebra {
    let n = rows * cols;
    Algebra::from_fn(
        n,
        |p, q| (p / cols) * cols + q % cols,
        |p, q| (q / cols) * cols + p % cols,
    )
    .unwrap()
    .with_name(format!("Rect{rows}x{cols}"))
}

pub fn all() -> Vec<Algebra> {
    vec![trivial(), l2(), rr2(), lr2(), m2(), f4r(), chain(3)]
}
