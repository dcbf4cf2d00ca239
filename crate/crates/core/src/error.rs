use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("cone or polyhedron is not pointed: {0}")]
    NotPointed(String),
    #[error("functional is unbounded below on the polyhedron: {0}")]
    UnboundedBelow(String),
    #[error("not a vertex: {0}")]
    NotAVertex(String),
    #[error("polyhedron is unbounded")]
    Unbounded,
    #[error("polyhedron is empty")]
    Empty,
    #[error("polytope does not have lattice vertices")]
    NotLattice,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("weight {0} lies outside the dual tail cone")]
    OutsideDualCone(String),
    #[error("unknown point label {0}")]
    UnknownPoint(String),
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("operands live on different bases")]
    BaseMismatch,
    #[error("not ample: {0}")]
    NotAmple(String),
    #[error("properness could not be decided: {0}")]
    Undecided(String),
    #[error("search cap {0} exceeded")]
    CapExceeded(u64),
    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
