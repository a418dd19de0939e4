//! Presentation files.
//!
//! A presentation file is line oriented:
//!
//! ```text
//! # genus-2 surface group
//! generators: a b c d
//! relators: abABcdCD
//! delta: 2
//! dehn: trusted
//! ```

use std::fs;
use std::path::Path;

use ggt_core::Presentation;

use crate::CliError;

pub fn read_presentation(path: &Path) -> Result<Presentation, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })?;
    Presentation::parse(&text).map_err(|e| CliError::File { path: path.display().to_string(), source: e })
}

pub fn write_presentation(path: &Path, p: &Presentation) -> Result<(), CliError> {
    fs::write(path, p.to_string()).map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })
}
