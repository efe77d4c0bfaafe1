use grepo_core::QueryError;
use grepo_driller::{ConfigError, DrillError};
use thiserror::Error;

/// Every failure the CLI reports, each with a fixed exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    UnknownTarget(String),
    #[error(transparent)]
    Failure(#[from] anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Failure(_) => 1,
            CliError::Usage(_) | CliError::Config(_) => 2,
            CliError::UnknownTarget(_) => 3,
        }
    }
}

impl From<QueryError> for CliError {
    fn from(e: QueryError) -> Self {
        match e {
            QueryError::NotFound(what) => CliError::UnknownTarget(format!("not found: {what}")),
            other => CliError::Failure(other.into()),
        }
    }
}

impl From<DrillError> for CliError {
    fn from(e: DrillError) -> Self {
        CliError::Failure(e.into())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Failure(e.into())
    }
}
