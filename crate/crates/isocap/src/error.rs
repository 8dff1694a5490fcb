//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("solver failed: {0}")]
    Solver(String),

    #[error("spectral error: {0}")]
    Spectral(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("shape file error: {0}")]
    ShapeFile(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
