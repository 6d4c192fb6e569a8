use std::time::Duration;

use thiserror::Error;

use crate::automaton::FormatError;
use crate::formula::ParseError;

#[derive(Debug, Error)]
pub enum Error {
    #[error("automaton exceeds the limit of {limit} states")]
    StateLimit { limit: usize },
    #[error("automaton has more than {limit} almost-simple accepting paths")]
    PathLimit { limit: usize },
    #[error("formula is not quantifier-free or not well formed: {0}")]
    Parse(#[from] ParseError),
    #[error("malformed automaton: {0}")]
    Format(#[from] FormatError),
    #[error("external translator `{command}` failed ({status}): {stderr}")]
    ExternalTool {
        command: String,
        status: String,
        stderr: String,
    },
    #[error("external translator `{command}` timed out after {timeout:?}")]
    ExternalTimeout { command: String, timeout: Duration },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Resource-limit errors, as opposed to malformed input or tool failure.
    pub fn is_capacity(&self) -> bool {
        matches!(self, Error::StateLimit { .. } | Error::PathLimit { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
