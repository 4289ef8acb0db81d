use std::fmt;

/// CLI failure modes, mapped onto the process exit codes:
/// configuration problems exit 2, validation failures exit 1.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    ValidationFailed,
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::ValidationFailed => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "configuration error: {msg}"),
            CliError::ValidationFailed => write!(f, "validation failed"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<ctqw_core::Error> for CliError {
    fn from(e: ctqw_core::Error) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Config(format!("io error: {e}"))
    }
}
