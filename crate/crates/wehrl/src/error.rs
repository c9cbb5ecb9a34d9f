use std::io;

/// Failures of the command-line layer, each mapped to a process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("malformed input: {0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] wehrl_core::Error),
    #[error("assertion failed: {0}")]
    Assertion(String),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    /// 2 usage/input, 3 numerical degeneracy, 4 assertion failure.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(wehrl_core::Error::NotMonotone { .. } | wehrl_core::Error::Stalled { .. }) => 4,
            CliError::Core(e) if e.is_degenerate() => 3,
            CliError::Assertion(_) => 4,
            _ => 2,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
