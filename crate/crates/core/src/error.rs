use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("group inverse does not exist: index is greater than one")]
    IndexGreaterThanOne,

    #[error("eigenvalue solver failed to converge on a {0}x{0} matrix")]
    EigenSolverFailed(usize),

    #[error("splittings do not share the same coefficient matrix")]
    MismatchedA,

    #[error("I - H is singular; the induced splitting does not exist")]
    SingularIminusH,

    #[error("range/null condition on {0} failed")]
    RangeNullConditionFailed(&'static str),

    #[error("K + X - A + Y U^-1 L is singular")]
    NonsingularityHypothesisFailed,

    #[error("splitting classification failed: {0}")]
    ClassificationFailed(String),

    #[error("diagonal entry {0} is zero")]
    ZeroDiagonal(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown theorem id `{0}`")]
    UnknownTheoremId(String),

    #[error("theorem `{0}` requires a shift delta")]
    MissingDelta(String),

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("unsupported Matrix Market field or format: {0}")]
    UnsupportedField(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
