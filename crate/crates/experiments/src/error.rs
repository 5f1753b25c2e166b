//! Error type for scenario configuration and execution.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExperimentError {
    /// A physics-core operation rejected its inputs or failed to converge.
    #[error(transparent)]
    Core(#[from] nolm_core::CoreError),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, ExperimentError>;
