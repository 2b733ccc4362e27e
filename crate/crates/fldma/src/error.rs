use std::io;

/// Failures of the command-line front end, each mapped to an exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical precondition violated: {0}")]
    Numerical(#[from] fldma_core::Error),
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    /// 1 configuration, 2 numerical precondition, 3 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Numerical(_) => 2,
            CliError::Io(_) | CliError::Csv(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
