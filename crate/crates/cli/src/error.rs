use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),

    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    #[error("{path}: column '{column}' not found in header")]
    MissingColumn { path: PathBuf, column: String },

    #[error("{path}: row {row} (line {line}), column '{column}': {reason}")]
    Parse { path: PathBuf, row: usize, line: u64, column: String, reason: String },

    #[error("{path}: {rows} data rows, need at least {needed} for {m} explanatory column(s)")]
    InsufficientRows { path: PathBuf, rows: usize, needed: usize, m: usize },

    #[error(transparent)]
    Model(#[from] mtreg_core::Error),

    #[error("cannot write report: {0}")]
    Output(String),
}

impl CliError {
    /// Process exit code; each error class has its own.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io { .. } => 3,
            CliError::MissingColumn { .. } => 4,
            CliError::Parse { .. } => 5,
            CliError::InsufficientRows { .. } => 6,
            CliError::Model(mtreg_core::Error::SingularDesign { .. }) => 7,
            CliError::Model(_) => 8,
            CliError::Output(_) => 9,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
