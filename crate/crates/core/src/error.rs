use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("fragment violation: {0}")]
    Fragment(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("state `{0}` has no outgoing edge")]
    NotLeftTotal(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    /// A self-check inside an engine failed. Always a bug.
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn syntax(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Syntax {
            line,
            column,
            message: message.into(),
        }
    }

    pub(crate) fn fragment(message: impl Into<String>) -> Self {
        Error::Fragment(message.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
