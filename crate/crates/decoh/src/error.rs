use std::path::PathBuf;

use decoh_core::Error as CoreError;

/// Failure of a scenario run, mapped onto process exit codes.
#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(CoreError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Other(String),
}

impl RunError {
    pub const EXIT_OK: i32 = 0;
    pub const EXIT_OTHER: i32 = 1;
    pub const EXIT_CONFIG: i32 = 2;
    pub const EXIT_NUMERICAL: i32 = 3;

    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => Self::EXIT_CONFIG,
            RunError::Numerical(_) => Self::EXIT_NUMERICAL,
            RunError::Io { .. } | RunError::Other(_) => Self::EXIT_OTHER,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        RunError::Io { path: path.into(), source }
    }

    /// Core error raised while building a model from its parameters.
    pub fn from_setup(e: CoreError) -> Self {
        match e {
            CoreError::QuadratureNotConverged { .. } => RunError::Numerical(e),
            e => RunError::Config(e.to_string()),
        }
    }

    /// Core error raised while evolving or analysing.
    pub fn from_run(e: CoreError) -> Self {
        match e {
            CoreError::InvalidParameter { .. }
            | CoreError::NotLindbladForm
            | CoreError::NonHermitianLindblad { .. }
            | CoreError::GridTooCoarse { .. }
            | CoreError::TruncationLoss { .. } => RunError::Config(e.to_string()),
            e => RunError::Numerical(e),
        }
    }
}
