use thiserror::Error;

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, unknown names, or an invalid config file.
    #[error("{0}")]
    Config(String),

    /// Unreadable or malformed input data.
    #[error("{0}")]
    Data(String),

    #[error("{failed} of {total} validation checks failed")]
    Validation { failed: usize, total: usize },

    #[error("cannot write {path}: {source}")]
    Output {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Output { .. } => 1,
            CliError::Data(_) => 2,
            CliError::Validation { .. } => 3,
        }
    }

    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }
}

/// Model errors raised while evaluating a configured loop or feed.
pub fn model_error(context: &str, e: loopkit::Error) -> CliError {
    CliError::Config(format!("{context}: {e}"))
}
