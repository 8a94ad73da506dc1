use thiserror::Error;

use crate::table::LatinDefect;

pub type Result<T, E = LoopError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LoopError {
    #[error("entry at row {row}, column {col} is {value}, outside 0..{order}")]
    OutOfRangeEntry {
        row: usize,
        col: usize,
        value: usize,
        order: usize,
    },

    #[error("table must have order at least 1")]
    EmptyTable,

    #[error("expected {expected} entries, found {found}")]
    ShapeMismatch { expected: usize, found: usize },

    #[error("not a loop: {0}")]
    NotALoop(LatinDefect),

    #[error("orders differ: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("set must be non-empty")]
    EmptySet,

    #[error("order {order} exceeds the supported bound {max}")]
    OrderTooLarge { order: usize, max: usize },

    #[error("set is not a subloop")]
    NotASubloop,

    #[error("subloop is not normal")]
    NotNormal,

    #[error("invalid order {0}")]
    InvalidOrder(usize),

    #[error("unknown filter `{0}`")]
    UnknownFilter(String),

    #[error("unknown catalog entry `{0}`")]
    UnknownCatalogEntry(String),

    #[error("unknown claim `{0}`")]
    UnknownClaim(String),

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid fraction `{0}`")]
    InvalidFraction(String),
}
