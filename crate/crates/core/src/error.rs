//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(String),

    #[error("model schema error: {0}")]
    Schema(String),

    #[error("layer {layer}: expected input width {expected}, got {got}")]
    LayerShape {
        layer: usize,
        expected: usize,
        got: usize,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    #[error("training diverged at epoch {epoch}: loss is not finite")]
    Diverged { epoch: usize },

    #[error("calibration set is empty")]
    EmptyCalibration,

    #[error("anchor lies outside the input domain at feature {index}")]
    AnchorOutsideDomain { index: usize },

    #[error("verifier returned an invalid counter-example: {0}")]
    InvalidCounterExample(String),

    #[error(
        "verifier returned a counter-example already in the constraint set; \
         the feasibility check and the verifier disagree on input {0:?}"
    )]
    StaleCounterExample(Vec<f64>),

    #[error("verifier could not decide a property and its witness is not a counter-example: {0}")]
    UnresolvedUnknown(String),
}

pub type Result<T> = std::result::Result<T, Error>;
