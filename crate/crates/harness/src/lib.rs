//! Input formats, the invariant battery and the `fibered` command line.

pub mod battery;
pub mod cli;
pub mod model;

use thiserror::Error;

/// Problems with the input itself; the CLI maps these to exit code 2.
#[derive(Debug, Error)]
pub enum InputError {
    #[error("malformed JSON at line {line}, column {column}: {msg}")]
    Json { line: usize, column: usize, msg: String },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("{0}")]
    Core(#[from] fibered_core::Error),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl From<serde_json::Error> for InputError {
    fn from(e: serde_json::Error) -> Self {
        InputError::Json { line: e.line(), column: e.column(), msg: e.to_string() }
    }
}

pub fn parse_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, InputError> {
    Ok(serde_json::from_str(text)?)
}
