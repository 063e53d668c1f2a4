//! Crate-wide error type and result alias.

use thiserror::Error;

/// Errors produced by dataset handling, kernel construction, clustering,
/// and scoring.
#[derive(Debug, Error)]
pub enum Error {
    /// A configuration describes something that cannot be built (bad
    /// generator parameters, out-of-range hyperparameters, unknown names).
    #[error("configuration error: {0}")]
    Config(String),

    /// A call-site argument violates an operation's contract.
    #[error("argument error: {0}")]
    Argument(String),

    /// An input file failed to parse. `row` is the 1-based data row
    /// (excluding the header), `column` the offending column name.
    #[error("parse error at row {row}, column {column}: {message}")]
    Parse {
        row: usize,
        column: String,
        message: String,
    },

    /// A kernel row sums to zero, so degree normalization is undefined
    /// for the named sample.
    #[error("degenerate graph: sample {0} has zero degree")]
    DegenerateGraph(usize),

    /// An iterative numeric routine failed to converge.
    #[error("numeric error: {0}")]
    Numeric(String),

    /// The requested score has no defined value on the given inputs.
    #[error("undefined metric: {0}")]
    UndefinedMetric(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
