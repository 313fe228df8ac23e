use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    Validation(#[from] stabshare_core::Error),
    #[error("{what}: {message}")]
    Io { what: String, message: String },
    #[error("{0}")]
    Check(String),
}

impl CliError {
    pub fn parse(line: usize, message: impl Into<String>) -> Self {
        CliError::Parse { line, message: message.into() }
    }

    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Parse { .. } => "parse_error",
            CliError::Validation(e) => e.code(),
            CliError::Io { .. } => "io_error",
            CliError::Check(_) => "check_failed",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(e) if e.is_too_large() => 2,
            _ => 1,
        }
    }
}
