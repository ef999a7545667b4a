use std::fmt::Display;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{origin}: {message}")]
    Config { origin: String, message: String },
    #[error("invalid [{section}]: {message}")]
    Invalid {
        section: &'static str,
        message: String,
    },
    #[error("integration failed: {0}")]
    Integration(String),
    #[error("verification failed: {failed} of {total} criteria did not pass")]
    Verification { failed: usize, total: usize },
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn invalid(section: &'static str, e: impl Display) -> Self {
        CliError::Invalid {
            section,
            message: e.to_string(),
        }
    }

    /// Process exit code: 2 configuration, 3 integration, 4 verification.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } | CliError::Invalid { .. } => 2,
            CliError::Integration(_) => 3,
            CliError::Verification { .. } => 4,
            CliError::Io { .. } => 1,
        }
    }
}
