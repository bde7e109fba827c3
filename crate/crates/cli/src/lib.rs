//! Library half of the `alphaflow` binary: config parsing, the `run`,
//! `export` and `verify` commands, and the exit-code mapping.

pub mod config;
pub mod export;
pub mod run;
pub mod verify;

use thiserror::Error;

pub use config::{ConfigError, RunConfig, RunMode};
pub use export::{cmd_export, ExportFormat};
pub use run::{cmd_run, RunOutcome};
pub use verify::{cmd_verify, SUITES};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    /// The configured initial body could not be built.
    #[error("invalid initial body: {0}")]
    Setup(alphaflow::Error),
    #[error("format {format} is not available for dimension {dim}")]
    FormatMismatch { format: &'static str, dim: usize },
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error(transparent)]
    Flow(#[from] alphaflow::Error),
    #[error("{context}: {source}")]
    Io {
        context: String,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn io(context: impl Into<String>) -> impl FnOnce(std::io::Error) -> CliError {
        let context = context.into();
        move |source| CliError::Io { context, source }
    }

    /// 1 for I/O, 2 for step failure, 3 for bad input, 4 for timeout.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Setup(_) | CliError::FormatMismatch { .. } | CliError::UnknownSuite(_) => 3,
            CliError::Flow(alphaflow::Error::StepFailure { .. }) => 2,
            CliError::Flow(alphaflow::Error::Timeout { .. }) => 4,
            CliError::Flow(alphaflow::Error::SnapshotMismatch(_) | alphaflow::Error::Json(_)) => 3,
            CliError::Flow(_) | CliError::Io { .. } => 1,
        }
    }
}
