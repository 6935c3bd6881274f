//! Identity checking and the variety profile of an algebra.

pub mod catalog;
mod profile;
mod term;

pub use profile::{classify, PropertyProfile};
pub use term::{parse_identity, parse_term, var_name, Identity, Term};

use std::collections::BTreeSet;

use crate::algebra::{Algebra, Elem};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    /// The lexicographically first failing assignment, variable 0 most
    /// significant.
    Fails(Vec<Elem>),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }
}

/// Exhaustive check of `id` over all `n^k` assignments.
pub fn check_identity(a: &Algebra, id: &Identity) -> Verdict {
    let n = a.size();
    let k = id.arity();
    let mut asg = vec![0; k];
    loop {
        if id.lhs.eval_fast(a, &asg) != id.rhs.eval_fast(a, &asg) {
            return Verdict::Fails(asg);
        }
        // odometer, last variable fastest
        let mut i = k;
        loop {
            if i == 0 {
                return Verdict::Holds;
            }
            i -= 1;
            asg[i] += 1;
            if asg[i] < n {
                break;
            }
            asg[i] = 0;
        }
    }
}

pub fn satisfies(a: &Algebra, id: &Identity) -> bool {
    check_identity(a, id).holds()
}

pub fn satisfies_all<'a>(a: &Algebra, ids: impl IntoIterator<Item = &'a Identity>) -> bool {
    ids.into_iter().all(|id| satisfies(a, id))
}

/// First identity in `ids` that fails, with its counterexample.
pub fn first_failure<'a>(
    a: &Algebra,
    ids: impl IntoIterator<Item = &'a Identity>,
) -> Option<(&'a Identity, Vec<Elem>)> {
    ids.into_iter().find_map(|id| match check_identity(a, id) {
        Verdict::Holds => None,
        Verdict::Fails(asg) => Some((id, asg)),
    })
}

pub fn is_skew_lattice(a: &Algebra) -> bool {
    satisfies_all(a, &catalog::skew_lattice_axioms())
}

pub fn is_lattice(a: &Algebra) -> bool {
    satisfies_all(a, &catalog::lattice_axioms())
}

/// Fails with `NotASkewLattice` naming the first violated axiom.
pub fn require_skew_lattice(a: &Algebra) -> Result<()> {
    match first_failure(a, &catalog::skew_lattice_axioms()) {
        None => Ok(()),
        Some((id, asg)) => Err(Error::NotASkewLattice(format!(
            "{} fails at {}",
            id.label(),
            format_assignment(&asg)
        ))),
    }
}

pub fn format_assignment(asg: &[Elem]) -> String {
    asg.iter()
        .enumerate()
        .map(|(i, v)| format!("{}={v}", var_name(i)))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Elements commuting with everything under both operations.
pub fn center(a: &Algebra) -> Result<BTreeSet<Elem>> {
    require_skew_lattice(a)?;
    Ok(a.elements()
        .filter(|&x| {
            a.elements()
                .all(|y| a.meet(x, y) == a.meet(y, x) && a.join(x, y) == a.join(y, x))
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::DualKind;
    use crate::fixtures::{self, f4r, l2, m2, rr2};

    #[test]
    fn check_examples() {
        assert_eq!(check_identity(&rr2(), &catalog::s(7)), Verdict::Fails(vec![0, 1]));
        for id in catalog::lattice_axioms() {
            assert!(satisfies(&l2(), &id), "{}", id.label());
        }
        let idem = parse_identity("x ^ x = x").unwrap();
        for a in fixtures::all() {
            if is_skew_lattice(&a) {
                assert!(satisfies(&a, &idem));
            }
        }
    }

    #[test]
    fn rr2_passes_the_skew_lattice_axioms() {
        // RR2 has 2^3 assignments for the three-variable axioms; the checker
        // must accept all of them
        for id in catalog::skew_lattice_axioms() {
            let mut count = 0;
            for x in 0..2 {
                for y in 0..2 {
                    for z in 0..2 {
                        let asg = [x, y, z];
                        let asg = &asg[..id.arity()];
                        if id.lhs.eval(&rr2(), asg) == id.rhs.eval(&rr2(), asg) {
                            count += 1;
                        }
                    }
                }
            }
            assert_eq!(count, 8, "{}", id.label());
            assert!(satisfies(&rr2(), &id));
        }
    }

    #[test]
    fn fixtures_validate() {
        for a in [l2(), rr2(), fixtures::lr2(), m2(), f4r(), fixtures::chain(3)] {
            assert!(is_skew_lattice(&a), "{:?}", a.name());
        }
        assert!(is_lattice(&m2()));
        assert!(!is_lattice(&f4r()));
        for (r, c) in [(1, 3), (2, 2), (3, 2)] {
            assert!(is_skew_lattice(&fixtures::rectangular(r, c)));
        }
    }

    #[test]
    fn counterexample_is_lexicographically_first() {
        // x ^ y = x fails on L2 first at x=1, y=0
        let id = parse_identity("x ^ y = x").unwrap();
        assert_eq!(check_identity(&l2(), &id), Verdict::Fails(vec![1, 0]));
    }

    #[test]
    fn center_examples() {
        assert_eq!(center(&l2()).unwrap(), BTreeSet::from([0, 1]));
        assert_eq!(center(&rr2()).unwrap(), BTreeSet::new());
        assert_eq!(center(&f4r()).unwrap(), BTreeSet::from([0, 3]));
        let bad = crate::algebra::Algebra::from_fn(2, |_, _| 0, |_, _| 0).unwrap();
        assert!(matches!(center(&bad), Err(Error::NotASkewLattice(_))));
    }

    #[test]
    fn duality_transport_on_fixtures() {
        for a in fixtures::all() {
            let v = a.dualize(DualKind::Vertical);
            for id in catalog::numbered() {
                assert_eq!(satisfies(&a, &id), satisfies(&v, &id.dual()), "{}", id.label());
            }
        }
    }
}
