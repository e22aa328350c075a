use thiserror::Error;

use crate::certificate::Rejection;
use crate::graph::VertexId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),

    #[error("loop at vertex {0}")]
    Loop(VertexId),

    #[error("parallel edge {0} -> {1}")]
    ParallelEdge(VertexId, VertexId),

    #[error("digraph is not strongly connected")]
    NotStrong,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("target set is empty")]
    EmptyTargets,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("not a dipath of the digraph: {0}")]
    NotADipath(Rejection),

    #[error("dipath has length {length}, at least {required} required")]
    PathTooShort { length: usize, required: usize },

    /// A step that the underlying combinatorial argument guarantees did not
    /// hold. Either the implementation is wrong or the argument has a gap;
    /// callers must surface it, never repair it.
    #[error("proof invariant violated: {0}")]
    ProofInvariantViolation(String),

    #[error("size guard exceeded: {what} is {actual}, limit {limit}")]
    GuardExceeded { what: &'static str, actual: usize, limit: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("operation cancelled")]
    Cancelled,
}

pub type Result<T> = std::result::Result<T, Error>;
