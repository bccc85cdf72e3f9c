use std::path::PathBuf;

use thiserror::Error;

/// Process exit codes.
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("{0}")]
    Budget(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error(transparent)]
    Core(dea_core::Error),

    /// A solver returned something that is not a common subsequence.
    #[error("{0}")]
    InvalidResult(String),
}

impl From<dea_core::Error> for CliError {
    fn from(e: dea_core::Error) -> Self {
        match e {
            dea_core::Error::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            other => CliError::Core(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => EXIT_PARSE,
            CliError::Budget(_) => EXIT_BUDGET,
            _ => EXIT_USAGE,
        }
    }
}

/// Input that could not be turned into a dataset.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("{source_name}:{line}: {message}")]
pub struct ParseError {
    pub source_name: String,
    /// 1-based; 0 when the error is not tied to a line.
    pub line: usize,
    pub message: String,
}
