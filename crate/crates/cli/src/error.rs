use std::io;
use std::path::PathBuf;

use thiserror::Error;
use voi_core::VoiError;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flag values or combinations.
    #[error("{0}")]
    Validation(String),
    #[error(transparent)]
    Model(#[from] VoiError),
    #[error("cannot read {}: {source}", path.display())]
    Read { path: PathBuf, source: io::Error },
    #[error("cannot write {}: {source}", path.display())]
    Write { path: PathBuf, source: io::Error },
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) | CliError::Model(_) => 1,
            CliError::Verification(_) => 2,
            CliError::Read { .. } | CliError::Write { .. } => 3,
        }
    }
}

pub fn invalid(field: &str, message: impl std::fmt::Display) -> CliError {
    CliError::Validation(format!("{field}: {message}"))
}

pub type CliResult<T> = Result<T, CliError>;
