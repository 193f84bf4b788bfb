use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, got {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("row index {index} out of range ({nrows} rows)")]
    RowIndexOutOfRange { index: usize, nrows: usize },

    #[error("column index {index} out of range ({ncols} columns)")]
    ColIndexOutOfRange { index: usize, ncols: usize },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("trivially infeasible: {0}")]
    Infeasible(String),

    #[error("trivially unbounded: {0}")]
    Unbounded(String),

    #[error("indefinite matrix: pivot {pivot:e} at index {index}")]
    Indefinite { index: usize, pivot: f64 },

    #[error("iterate left the strict interior: {0}")]
    LeftInterior(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
