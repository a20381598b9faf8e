use std::path::PathBuf;

use thiserror::Error;

/// Process exit status for a run that completed but did not converge.
pub const EXIT_NOT_CONVERGED: i32 = 1;
/// Process exit status for bad flags, config files, names or paths.
pub const EXIT_CONFIG: i32 = 2;
/// Process exit status for a problem that fails validation or evaluates to NaN.
pub const EXIT_FAULT: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("unknown problem '{0}' (see `iprox list-problems`)")]
    UnknownProblem(String),
    #[error("unknown barrier '{0}'")]
    UnknownBarrier(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("cannot read config file {path}: {source}")]
    ConfigFile {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed config file {path}: {source}")]
    ConfigParse {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("cannot write to {path}: {source}")]
    Output {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("problem '{problem}' failed validation: {failed}")]
    ValidationFailed { problem: String, failed: String },
    #[error("problem fault: {0}")]
    Fault(iprox::Error),
    #[error("solver rejected input: {0}")]
    Solver(iprox::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::ValidationFailed { .. } | CliError::Fault(_) => EXIT_FAULT,
            _ => EXIT_CONFIG,
        }
    }

    pub(crate) fn output(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Output { path: path.into(), source }
    }
}

impl From<iprox::Error> for CliError {
    fn from(err: iprox::Error) -> Self {
        match err {
            iprox::Error::EvalFault { .. } => CliError::Fault(err),
            other => CliError::Solver(other),
        }
    }
}
