//! Finite skew lattices: identities, Green's relations, congruences,
//! decompositions, coset structure and model search.

pub mod algebra;
pub mod cli;
pub mod congruence;
pub mod cosets;
pub mod decompose;
pub mod dot;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod green;
pub mod identities;
pub mod partition;
pub mod search;

pub use algebra::{are_isomorphic, Algebra, DualKind, Elem, Morphism, Op};
pub use error::{Error, Result};
