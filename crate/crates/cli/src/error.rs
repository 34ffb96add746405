use std::path::PathBuf;

use lcbayes_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("{0}")]
    Schema(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] CoreError),
}

impl CliError {
    /// 2 for bad input, 3 for a failed internal certificate, 4 for division
    /// by zero.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(CoreError::CertificateFailure(_)) => 3,
            CliError::Core(CoreError::ZeroDivision) => 4,
            _ => 2,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
