use std::path::PathBuf;
use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("generator {index} ({text:?}): {source}")]
    Generator {
        index: usize,
        text: String,
        source: semijulia_core::Error,
    },

    #[error("config {path}: {source}")]
    Config {
        path: PathBuf,
        source: serde_json::Error,
    },

    #[error(transparent)]
    Core(#[from] semijulia_core::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        use semijulia_core::Error as E;
        let code = match self {
            CliError::Usage(_) | CliError::Generator { .. } | CliError::Config { .. } => 2,
            CliError::Core(E::NonConvergence { .. } | E::NoRepellingFixedPoint { .. } | E::GuardViolation { .. }) => 3,
            CliError::Core(_) => 2,
            CliError::Io { .. } => 4,
        };
        ExitCode::from(code)
    }
}

pub type CliResult<T> = Result<T, CliError>;
