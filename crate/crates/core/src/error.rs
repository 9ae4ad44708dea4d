use thiserror::Error;

/// Errors reported by the library.
///
/// The variants follow the failure classes used throughout the crate:
/// malformed input, a domain precondition that does not hold (for example a
/// graph that is not factor-critical), and exhausted search budgets.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph of order {order}")]
    VertexOutOfRange { vertex: usize, order: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid family parameters: {0}")]
    InvalidFamily(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("precondition failed: {0}")]
    Domain(String),

    #[error("resource limit: {0}")]
    Resource(String),

    /// An internal consistency check failed. Seeing this is a bug.
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
