use thiserror::Error;

use crate::sigraph::{EdgeId, VertexId};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("edge {edge}: orientation ({detail}) violates its sign")]
    Consistency { edge: EdgeId, detail: String },

    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),

    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),

    #[error("invalid argument: {0}")]
    Argument(String),

    /// A caller broke an operation's precondition.
    #[error("contract violation: {0}")]
    Contract(String),

    /// A guarantee the construction relies on did not hold.
    #[error("invariant violation: {0}")]
    Invariant(String),

    /// The instance lies outside the hypotheses the pipeline handles.
    #[error("unsupported instance: {0}")]
    Unsupported(String),

    #[error("search budget exhausted: {0}")]
    Budget(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }
}
