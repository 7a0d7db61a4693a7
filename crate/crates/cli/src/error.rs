use std::path::PathBuf;

use thiserror::Error;

/// Everything the command line can fail with, each mapped to a stable exit
/// code by [`CliError::exit_code`].
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {message}", path.display())]
    Parse { path: PathBuf, message: String },

    #[error("{}: {source}", path.display())]
    Invalid {
        path: PathBuf,
        #[source]
        source: injres::Error,
    },

    #[error("{0}")]
    Rejected(String),

    #[error("{0}")]
    Engine(#[from] injres::Error),

    #[error("internal invariant breached: {0}")]
    Internal(String),

    #[error("cannot write output: {0}")]
    Output(#[from] std::io::Error),
}

impl CliError {
    /// 0 success, 1 validation failure, 2 usage error, 3 internal breach.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => 2,
            CliError::Parse { .. } | CliError::Invalid { .. } | CliError::Rejected(_) => 1,
            CliError::Engine(e) => engine_code(e),
            CliError::Internal(_) | CliError::Output(_) => 3,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, message: impl ToString) -> Self {
        CliError::Parse {
            path: path.into(),
            message: message.to_string(),
        }
    }
}

fn engine_code(e: &injres::Error) -> i32 {
    match e {
        injres::Error::Invariant(_) => 3,
        _ => 1,
    }
}

pub type CliResult<T> = Result<T, CliError>;
