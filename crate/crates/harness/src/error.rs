use std::path::PathBuf;

use hive_vqe::VqeError;
use thiserror::Error;

/// Process exit codes of the `hive-vqe` binary.
pub mod exit {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const CONFIG: i32 = 2;
    pub const NUMERIC: i32 = 3;
    pub const TARGET_NOT_REACHED: i32 = 4;
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{0}")]
    Usage(String),
    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: {message}", path.display())]
    Parse { path: PathBuf, message: String },
    #[error(transparent)]
    Numeric(#[from] VqeError),
}

impl HarnessError {
    pub fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self::Config {
            path: path.into(),
            message: message.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    pub fn parse(path: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        Self::Parse {
            path: path.into(),
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => exit::USAGE,
            Self::Config { .. } | Self::Io { .. } | Self::Parse { .. } => exit::CONFIG,
            // Bad sizes and lengths are input problems, not numerical failures.
            Self::Numeric(
                VqeError::TooFewQubits { .. }
                | VqeError::TooManyQubits { .. }
                | VqeError::ParameterLength { .. }
                | VqeError::DimensionMismatch { .. }
                | VqeError::InvalidConfig(_),
            ) => exit::CONFIG,
            Self::Numeric(_) => exit::NUMERIC,
        }
    }
}

pub type Result<T, E = HarnessError> = std::result::Result<T, E>;
