//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("config error (line {line}): {msg}")]
    Config { line: usize, msg: String },

    #[error("singular linear system: {0}")]
    Singular(String),

    #[error("alpha must lie strictly inside (1, 2), got {0}")]
    AlphaRange(f64),

    #[error("degenerate bound: {0}")]
    DegenerateBound(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
