use std::io;

use thiserror::Error;

/// Errors raised while building, evaluating, solving or (de)serializing problems.
#[derive(Debug, Error)]
pub enum CobiError {
    #[error("invalid spectrum: eigenvalue {index} is {value}, must be > 0")]
    InvalidSpectrum { index: usize, value: f64 },

    #[error("invalid rotation: |R^T R - I|_inf = {deviation:e} exceeds 1e-10")]
    InvalidRotation { deviation: f64 },

    #[error("matrix is not symmetric: entry ({row}, {col}) differs by {difference:e}")]
    NotSymmetric { row: usize, col: usize, difference: f64 },

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("transform domain violation in {context}: input {input} below {minimum}")]
    Domain { context: String, input: f64, minimum: f64 },

    #[error("index {index} out of range (len {len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("generation failed: {0}")]
    Generation(String),

    #[error("validation failed for `{field}`: {reason}")]
    Validation { field: String, reason: String },

    #[error("unsupported schema version {found} (supported: {supported})")]
    Schema { found: u32, supported: u32 },

    #[error("classification failed: {0}")]
    Classification(String),

    #[error("ideal/nadir computation failed: {0}")]
    IdealNadir(String),

    #[error("experiment failed: {0}")]
    Experiment(String),

    #[error("i/o error: {0}")]
    Io(#[from] io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl CobiError {
    pub(crate) fn validation(field: impl Into<String>, reason: impl Into<String>) -> Self {
        CobiError::Validation { field: field.into(), reason: reason.into() }
    }
}

pub type Result<T> = std::result::Result<T, CobiError>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(CobiError::DimensionMismatch { expected, found });
    }
    Ok(())
}
