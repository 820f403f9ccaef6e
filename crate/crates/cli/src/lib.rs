//! IO side of `harmsum`: the weight grammar, table files, JSON and CSV
//! formats, and the subcommands behind the `harmsum` binary.

use std::fmt;

use harmsum_core::Error;

pub mod commands;
pub mod formats;
pub mod grammar;

/// Process exit codes.
pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Io(std::io::Error),
    Json(serde_json::Error),
    Csv(csv::Error),
    Parse(String),
}

impl CliError {
    /// `NotDoubling` and `SlopeOverflow` are verdicts about the input, the
    /// rest are configuration problems.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::NotDoubling(_)) | CliError::Core(Error::SlopeOverflow { .. }) => EXIT_FAIL,
            _ => EXIT_CONFIG,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "IoError: {e}"),
            CliError::Json(e) => write!(f, "JSON error: {e}"),
            CliError::Csv(e) => write!(f, "CSV error: {e}"),
            CliError::Parse(msg) => write!(f, "ConfigError: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Json(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Csv(e)
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
