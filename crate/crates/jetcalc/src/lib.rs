//! Randomized verification suites, JSON file formats and the command-line
//! driver built on `jetcalc-core`.

pub mod commands;
pub mod files;
pub mod random;
pub mod report;
pub mod suites;

use std::io;

/// Problems with user input: unreadable files, malformed JSON, or data the
/// core library rejects.
#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("{0}: {1}")]
    Io(String, #[source] io::Error),
    #[error("{0}: {1}")]
    Json(String, #[source] serde_json::Error),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] jetcalc_core::Error),
}
