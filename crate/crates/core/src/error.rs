use thiserror::Error;

use crate::algebra::{Elem, Op};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("table entry ({row}, {col}) = {value} is out of range")]
    OutOfRangeEntry { row: usize, col: usize, value: usize },
    #[error("bad table shape: {0}")]
    BadShape(String),
    #[error("element {0} is out of range for a carrier of size {1}")]
    IndexOutOfRange(Elem, usize),
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("variable x{0} is not bound by the assignment")]
    UnboundVariable(usize),
    #[error("unknown identity tag `{0}`")]
    UnknownTag(String),
    #[error("not a skew lattice: {0}")]
    NotASkewLattice(String),
    #[error("Green's relation mismatch: {0}")]
    GreenMismatch(String),
    #[error("partition is not a congruence: {0}")]
    NotACongruence(String),
    #[error("map is not a homomorphism: {op} fails at ({x}, {y})")]
    NotAHomomorphism { op: Op, x: Elem, y: Elem },
    #[error("morphisms do not share a common target")]
    TargetMismatch,
    #[error("rectangularity failure: {0}")]
    RectangularityFailure(String),
    #[error("component partition is not a congruence: {0}")]
    ComponentNotCongruence(String),
    #[error("classes {0} and {1} are not comparable")]
    NotComparable(usize, usize),
    #[error("coset partition failure: {0}")]
    PartitionFailure(String),
    #[error("coset bijections are not composable: {0}")]
    LevelMismatch(String),
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
    #[error("search budget exceeded")]
    BudgetExceeded,
    #[error("size {0} exceeds the canonicalization limit of {1}")]
    SizeLimit(usize, usize),
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
