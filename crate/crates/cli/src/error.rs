use std::fmt;

use mgs_core::Error;
use serde_json::Value;

/// A failure with a fixed process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Unreadable or malformed input (exit 2).
    Parse(String),
    /// A label or index that does not name a valid target (exit 3).
    Index(String),
    /// Inputs are well formed but violate a precondition (exit 4).
    Domain(String),
    /// A broken internal invariant (exit 5); `repro` is dumped to disk.
    Internal { message: String, repro: Value },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Index(_) => 3,
            CliError::Domain(_) => 4,
            CliError::Internal { .. } => 5,
        }
    }

    /// Classifies a library error. `repro` describes the inputs in case the
    /// error turns out to be internal.
    pub fn from_core(e: Error, repro: Value) -> CliError {
        let message = e.to_string();
        if e.is_internal() {
            return CliError::Internal { message, repro };
        }
        match e.root() {
            Error::FrozenMutation(_) | Error::UnknownVertex(_) => CliError::Index(message),
            Error::MissingLevel(_)
            | Error::DuplicateVertex(_)
            | Error::RowLength { .. }
            | Error::MissingRow(_)
            | Error::NonzeroDiagonal(_)
            | Error::NotSkewSymmetrizable(..)
            | Error::InvalidQuiver(_)
            | Error::InvalidPermutation(_)
            | Error::InvalidPresentation(_) => CliError::Parse(message),
            _ => CliError::Domain(message),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(m) => write!(f, "parse error: {m}"),
            CliError::Index(m) => write!(f, "invalid index: {m}"),
            CliError::Domain(m) => write!(f, "precondition failed: {m}"),
            CliError::Internal { message, .. } => write!(f, "internal error: {message}"),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
