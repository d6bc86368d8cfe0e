use thiserror::Error;

use crate::quantum::CellId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Malformed register layout, arity mismatch, bad permutation and the like.
    #[error("structural error: {0}")]
    Structural(String),

    #[error("cell {0} is not part of the register")]
    UnknownCell(CellId),

    #[error("register would hold {requested} qubits, above the limit of {limit}")]
    TooManyQubits { requested: usize, limit: usize },

    #[error("validation error: {0}")]
    Validation(String),

    #[error("unknown name: {0}")]
    Lookup(String),

    #[error("heads {first} and {second} both point at cell {cell} for a two-qubit observable")]
    OverlappingHeads {
        first: usize,
        second: usize,
        cell: CellId,
    },

    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("head {head} moved off tape {tape} to cell {index}")]
    Movement { head: usize, tape: usize, index: i64 },

    #[error("model violation: {0}")]
    ModelViolation(String),

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("construction error: {0}")]
    Construction(String),

    #[error("unsupported observable `{0}` for this lowering")]
    UnsupportedObservable(String),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
