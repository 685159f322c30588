use std::io;

use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("unknown preset {0}, expected 1 or 2")]
    UnknownPreset(u32),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("numerical error: {0}")]
    Numerical(String),

    /// Pivot `index` of a triangular factor fell below the rank tolerance.
    #[error("singular matrix: pivot {index} is {value:e}, below tolerance {tol:e}")]
    Singular { index: usize, value: f64, tol: f64 },

    #[error("simulation diverged at step {step}: non-finite value in {field}")]
    Divergence { step: usize, field: &'static str },

    #[error("format error at byte offset {offset}: {message}")]
    Format { offset: usize, message: String },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    /// Process exit code used by the CLI: 2 for data/format problems, 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Numerical(_) | Error::Singular { .. } | Error::Divergence { .. } => 3,
            _ => 2,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
