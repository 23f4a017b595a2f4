use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid quiver: {0}")]
    InvalidQuiver(String),
    #[error("quiver is not connected")]
    Disconnected,
    #[error("quiver has a directed cycle")]
    Cyclic,
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("unknown arrow {0:?}")]
    UnknownArrow(String),
    #[error("underlying graph is not of type A~: {0}")]
    NotAtilde(String),
    #[error("vertex {vertex:?} is not a restrictive {kind}: {detail}")]
    NotSinkOrSource {
        vertex: String,
        kind: &'static str,
        detail: String,
    },
    #[error("selection failed: {0}")]
    Selection(String),
    #[error("input is silting-discrete; nothing to reduce")]
    DiscreteInput,
    #[error("normalization failed: {0}")]
    Normalization(String),
    #[error("field error: {0}")]
    Field(String),
    #[error("representation error: {0}")]
    Representation(String),
    #[error("mismatched inputs: {0}")]
    Mismatch(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("unsupported parameters: {0}")]
    Unsupported(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("positive-degree arrow {0:?}; normalize first")]
    PositiveDegree(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
