use thiserror::Error;

/// Errors raised by the library.
///
/// The variants fall into three classes that the CLI maps onto distinct exit
/// codes: bad input (`Precondition`, `Parse`, `MissingDimension`,
/// `UnknownSymbol`), and internal failures (`Internal`), which indicate a
/// truncation or shape bug rather than a user mistake.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("weight mismatch: {left} vs {right}")]
    WeightMismatch { left: u32, right: u32 },

    #[error("cannot parse {what} from {input:?}: {reason}")]
    Parse {
        what: &'static str,
        input: String,
        reason: String,
    },

    #[error("dimension table {group:?} has no entry for weight {weight}")]
    MissingDimension { group: String, weight: i64 },

    #[error("no transformation rule for symbol {0:?}")]
    UnknownSymbol(String),

    #[error("internal assertion failed: {0}")]
    Internal(String),
}

impl Error {
    pub fn parse(what: &'static str, input: &str, reason: impl Into<String>) -> Self {
        Error::Parse {
            what,
            input: input.to_string(),
            reason: reason.into(),
        }
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }

    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
