//! The search engine against the naive oracle in `common`.

mod common;

use common::{classes_of, oracle};
use skewlat::identities::catalog;
use skewlat::search::{enumerate_models, ModelQuery};

#[test]
fn engine_matches_naive_oracle() {
    for (n, expected) in [(1, 1), (2, 3), (3, 7)] {
        let (all, lattices) = oracle(n);
        assert_eq!(all.len(), expected, "oracle count at n={n}");
        let engine = enumerate_models(&ModelQuery::new(n, catalog::skew_lattice_axioms())).unwrap();
        assert_eq!(engine.len(), all.len(), "n={n}");
        assert_eq!(classes_of(n, engine.algebras()), all, "n={n}");
        let lat = enumerate_models(&ModelQuery::new(n, catalog::lattice_axioms())).unwrap();
        assert_eq!(classes_of(n, lat.algebras()), lattices, "lattices n={n}");
    }
}

#[test]
fn pruning_loses_nothing() {
    for n in 1..=3 {
        let pruned = ModelQuery::new(n, catalog::skew_lattice_axioms());
        let mut naive = pruned.clone();
        naive.propagate = false;
        naive.prefill_idempotents = false;
        let a = enumerate_models(&pruned).unwrap();
        let b = enumerate_models(&naive).unwrap();
        assert!(a.algebras().eq(b.algebras()), "n={n}");
    }
}

#[test]
fn idempotent_prefill_loses_nothing() {
    for n in 1..=4 {
        let with = ModelQuery::new(n, catalog::skew_lattice_axioms());
        let mut without = with.clone();
        without.prefill_idempotents = false;
        let a = enumerate_models(&with).unwrap();
        let b = enumerate_models(&without).unwrap();
        assert!(a.algebras().eq(b.algebras()), "n={n}");
    }
}
