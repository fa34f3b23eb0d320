use thiserror::Error;

/// Errors produced anywhere in the library.
///
/// The variants are grouped so that a front end can map them onto exit codes:
/// parse failures, capacity limits and ill-defined homomorphism data are kept
/// apart from plain argument errors.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid chain complex: {0}")]
    InvalidComplex(String),

    /// `position` is a 0-based character offset into the parsed text.
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("unknown generator `{name}` at position {position}")]
    UnknownGenerator { name: String, position: usize },

    #[error("duplicate generator `{name}` at position {position}")]
    DuplicateGenerator { name: String, position: usize },

    #[error("invalid multiplication table: {0}")]
    InvalidTable(String),

    #[error("group order {order} exceeds the oracle cap of {cap}")]
    CapacityExceeded { order: String, cap: usize },

    #[error("ill-defined homomorphism: {0}")]
    IllDefinedMap(String),

    #[error("mismatched group data: {0}")]
    Mismatch(String),

    #[error("not a finite group: {0}")]
    NotFinite(String),

    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    pub(crate) fn syntax(position: usize, message: impl Into<String>) -> Self {
        Error::Syntax {
            position,
            message: message.into(),
        }
    }

    /// True for the parse-level failures (syntax, unknown or duplicate names).
    pub fn is_syntax(&self) -> bool {
        matches!(
            self,
            Error::Syntax { .. }
                | Error::UnknownGenerator { .. }
                | Error::DuplicateGenerator { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
