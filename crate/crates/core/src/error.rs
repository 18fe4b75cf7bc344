//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside its mathematical domain (non-finite input,
    /// out-of-range parameter, shape mismatch).
    #[error("domain error: {0}")]
    Domain(String),

    /// `disambiguate` was asked about a word with no lexicon entry.
    #[error("no senses registered for word `{0}`")]
    NoSenses(String),

    /// A pair set references a token with no attention map.
    #[error("no attention map for token `{0}`")]
    UnknownToken(String),

    /// `build_ambiguity_world` was given a scenario name it does not know.
    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),

    /// One or more named invariant violations, reported together.
    #[error("validation failed: {}", .0.join(", "))]
    Validation(Vec<String>),

    /// Structured-text input could not be parsed.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
