use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("{what} cap exceeded: requested {requested}, cap is {cap}")]
    CapExceeded {
        what: &'static str,
        requested: u64,
        cap: u64,
    },

    #[error("search incomplete: node budget of {cap} exhausted")]
    Incomplete { cap: u64 },

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn verification(msg: impl Into<String>) -> Self {
        Error::Verification(msg.into())
    }

    pub(crate) fn io(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }

    pub(crate) fn cap(
        what: &'static str,
        requested: impl TryInto<u64>,
        cap: impl TryInto<u64>,
    ) -> Self {
        Error::CapExceeded {
            what,
            requested: requested.try_into().unwrap_or(u64::MAX),
            cap: cap.try_into().unwrap_or(u64::MAX),
        }
    }
}
