//! Command-line front end for `ggt-core`.
//!
//! [`run`] parses arguments, dispatches to the core algorithms and returns
//! the report text and exit code without touching the process, so the
//! binary and the tests share one code path.

pub mod cli;
pub mod io;

use std::fmt;

pub use cli::{run, Outcome};

/// Exit code for a definite result.
pub const EXIT_OK: i32 = 0;
/// Exit code for usage and input errors.
pub const EXIT_USAGE: i32 = 1;
/// Exit code for an inconclusive result.
pub const EXIT_INCONCLUSIVE: i32 = 2;
/// Exit code for a search stopped by a resource cap.
pub const EXIT_RESOURCE: i32 = 3;

/// Environment variable overriding the global state cap.
pub const MAX_STATES_ENV: &str = "GGT_MAX_STATES";

#[derive(Debug)]
pub enum CliError {
    Core(ggt_core::Error),
    /// A core error attributed to a presentation file.
    File { path: String, source: ggt_core::Error },
    Io { path: String, message: String },
    Usage(String),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Core(e) | CliError::File { source: e, .. } => e.code(),
            CliError::Io { .. } => "io",
            CliError::Usage(_) => "usage",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) | CliError::File { source: e, .. } => match e {
                ggt_core::Error::ResourceCap { .. } | ggt_core::Error::OrderAboveCap { .. } => EXIT_RESOURCE,
                _ => EXIT_USAGE,
            },
            CliError::Io { .. } | CliError::Usage(_) => EXIT_USAGE,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::File { path, source } => write!(f, "{path}: {source}"),
            CliError::Io { path, message } => write!(f, "{path}: {message}"),
            CliError::Usage(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CliError {}

impl From<ggt_core::Error> for CliError {
    fn from(e: ggt_core::Error) -> Self {
        CliError::Core(e)
    }
}
