use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("column {name:?} not found in input")]
    MissingColumn { name: String },

    #[error("row {row}, column {column:?}: cannot parse {value:?} as a finite number")]
    BadCell {
        row: usize,
        column: String,
        value: String,
    },

    #[error("row {row}: label value {value:?} is not 0 or 1")]
    BadLabel { row: usize, value: String },

    #[error("invalid schema: {0}")]
    InvalidSchema(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("not enough rows with label {label}: need {needed}, have {available}")]
    InsufficientClass {
        label: u8,
        needed: usize,
        available: usize,
    },

    #[error("training data must contain both classes")]
    SingleClass,

    #[error("{got} features exceeds the bound of {bound} for this operation")]
    FeatureCountBound { got: usize, bound: usize },

    #[error("training diverged at epoch {epoch}: non-finite parameter")]
    Diverged { epoch: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
