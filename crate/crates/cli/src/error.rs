use std::io;
use std::path::PathBuf;

use squeezed_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("config {path}:{line}: {msg}")]
    Config { path: PathBuf, line: usize, msg: String },
    #[error("{0}")]
    Core(#[from] CoreError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("output: {0}")]
    Write(#[from] io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

/// Process exit status.
pub mod exit {
    pub const OK: i32 = 0;
    pub const VALIDATION: i32 = 1;
    pub const DOMAIN: i32 = 2;
    pub const NOT_CONVERGED: i32 = 3;
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        Self::Usage(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Core(e) => match e {
                CoreError::Regime { .. } | CoreError::BelowCritical { .. } | CoreError::NotXForm(_) => exit::DOMAIN,
                CoreError::StepUnderflow { .. } | CoreError::NotConverged { .. } => exit::NOT_CONVERGED,
                _ => exit::VALIDATION,
            },
            _ => exit::VALIDATION,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
