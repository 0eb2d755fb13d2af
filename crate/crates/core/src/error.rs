use thiserror::Error;

/// Errors raised by constructions and checks.
///
/// Check *failures* are not errors: they are carried in reports. An `Error`
/// means the question could not be asked (bad input, missing structure, or a
/// resource cap).
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("{what} exceeds cap ({actual} > {limit})")]
    ResourceCap {
        what: String,
        limit: usize,
        actual: usize,
    },

    #[error("incomplete structure: {0}")]
    Incomplete(String),

    #[error("not in universe: {0}")]
    NotInUniverse(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn cap(what: impl Into<String>, limit: usize, actual: usize) -> Self {
        Error::ResourceCap {
            what: what.into(),
            limit,
            actual,
        }
    }

    /// Process exit status associated with this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ResourceCap { .. } => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
