use thiserror::Error;

/// Everything that can go wrong in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error at line {line}, column {column}: {msg}")]
    Parse {
        line: usize,
        column: usize,
        msg: String,
    },

    #[error("zero polynomial where a nonzero one is required: {0}")]
    ZeroPolynomial(String),

    #[error("incompatible term ratios: {0}")]
    Cocycle(String),

    #[error("structure error: {0}")]
    Structure(String),

    #[error("zero term in generalized product at j = {0}")]
    ZeroTerm(i64),

    #[error("factor does not split over the rationals: {0}")]
    Splitting(String),

    #[error("integrity error: {0}")]
    Integrity(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn dim(expected: usize, got: usize) -> Self {
        Error::Dimension { expected, got }
    }

    /// True for failures that are about the mathematics of the input rather
    /// than its shape (used by the CLI to pick an exit code).
    pub fn is_mathematical(&self) -> bool {
        matches!(
            self,
            Error::Cocycle(_)
                | Error::Structure(_)
                | Error::ZeroTerm(_)
                | Error::Splitting(_)
                | Error::Integrity(_)
        )
    }
}
