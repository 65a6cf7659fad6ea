use thiserror::Error;

/// Exit status for a run with no failing check.
pub const EXIT_OK: i32 = 0;
/// A verification check, invariant pre-check or computation failed.
pub const EXIT_VERIFICATION: i32 = 1;
/// Bad arguments, unreadable files, malformed JSON.
pub const EXIT_USAGE: i32 = 2;
/// Well-formed JSON that does not follow the object schema.
pub const EXIT_SCHEMA: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("invariant failure: {0}")]
    Invariant(String),
    #[error("{0}")]
    Computation(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } | CliError::Parse(_) => EXIT_USAGE,
            CliError::Schema(_) => EXIT_SCHEMA,
            CliError::Invariant(_) | CliError::Computation(_) => EXIT_VERIFICATION,
        }
    }
}

pub fn schema(msg: impl Into<String>) -> CliError {
    CliError::Schema(msg.into())
}

pub fn computation(e: impl std::fmt::Display) -> CliError {
    CliError::Computation(e.to_string())
}

pub type Result<T> = std::result::Result<T, CliError>;
