use std::path::PathBuf;
use thiserror::Error;

/// Process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    Validation = 2,
    NonConvergence = 3,
    Anomaly = 4,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{path}: {source}")]
    Input { path: PathBuf, source: nilprox_core::Error },
    #[error(transparent)]
    Core(#[from] nilprox_core::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
}

impl CliError {
    pub fn status(&self) -> ExitStatus {
        use nilprox_core::Error as E;
        match self {
            CliError::Core(
                E::NoConvergence { .. }
                | E::DegreeCapExceeded { .. }
                | E::MissingBox { .. }
                | E::LadderExhausted { .. },
            ) => ExitStatus::NonConvergence,
            _ => ExitStatus::Validation,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
