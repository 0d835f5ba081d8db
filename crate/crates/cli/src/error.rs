//! CLI error classification mapped onto process exit codes.

use std::fmt;

/// Failure modes of one run, each with a fixed exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad invocation or config: exit 2.
    Usage(String),
    /// A dimension cap was exceeded: exit 3.
    Capacity(String),
    /// Filesystem trouble while writing outputs: exit 2.
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::Capacity(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Capacity(msg) => write!(f, "capacity exceeded: {msg}"),
            CliError::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<everett_core::Error> for CliError {
    fn from(e: everett_core::Error) -> Self {
        match e {
            everett_core::Error::Capacity { requested, cap } => {
                CliError::Capacity(format!("requested dimension {requested} exceeds cap {cap}"))
            }
            other => CliError::Usage(other.to_string()),
        }
    }
}
