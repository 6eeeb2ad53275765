use thiserror::Error;

use crate::moves::ValidationReport;

/// Errors raised by graph construction, moves, matrix algebra and parsing.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("unknown edge `{0}`")]
    UnknownEdge(String),

    #[error("duplicate {kind} id `{id}`")]
    DuplicateId { kind: &'static str, id: String },

    #[error("invalid identifier `{0}`: ids must be non-empty and free of whitespace, `#`, `{{` and `}}`")]
    InvalidId(String),

    #[error("path is not composable at position {position}")]
    NotComposable { position: usize },

    #[error("path length must be at least 1")]
    EmptyPath,

    #[error("power must be at least 1")]
    ZeroPower,

    #[error("graph too large for isomorphism search: size {size} exceeds limit {limit}")]
    TooLarge { size: usize, limit: usize },

    #[error("vertex `{0}` receives no edges")]
    SourceVertex(String),

    #[error("vertex `{0}` emits no edges")]
    NoOutgoingEdges(String),

    #[error("graph has sources {0:?}; the construction needs a regular graph")]
    NotRegular(Vec<String>),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("malformed split spec: {0}")]
    MalformedSpec(String),

    #[error("split spec rejected:\n{0}")]
    InvalidSpec(ValidationReport),

    #[error("stage {stage}: {message}")]
    StageMismatch { stage: usize, message: String },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("negative entry in witness at ({row}, {col})")]
    NegativeEntry { row: usize, col: usize },

    #[error("window must be at least {min}, got {got}")]
    WindowTooSmall { min: usize, got: usize },

    #[error("exponent must be nonzero")]
    ZeroExponent,

    #[error("circle graph: {0}")]
    Circle(String),

    #[error("correspondence: {0}")]
    Correspondence(String),

    #[error("{source_name}:{line}: {message}")]
    Parse {
        source_name: String,
        line: usize,
        message: String,
    },

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            source_name: "<input>".to_string(),
            line,
            message: message.into(),
        }
    }

    /// Attach a file name to a parse error; other variants pass through.
    pub fn with_source(self, name: &str) -> Self {
        match self {
            Error::Parse { line, message, .. } => Error::Parse {
                source_name: name.to_string(),
                line,
                message,
            },
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
