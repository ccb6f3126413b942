use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A size limit (word length, band count, matrix order) was exceeded.
    #[error("resource limit exceeded: {what} would need {requested}, cap is {cap}")]
    ResourceCap {
        what: &'static str,
        requested: u128,
        cap: u128,
    },

    /// A least-squares fit had no spread in its abscissae.
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    /// An operation produced an empty set where a nonempty one is required.
    #[error("empty result: {0}")]
    Empty(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn cap(what: &'static str, requested: impl Into<u128>, cap: impl Into<u128>) -> Self {
        Error::ResourceCap {
            what,
            requested: requested.into(),
            cap: cap.into(),
        }
    }

    /// Short machine-readable tag for the error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::ResourceCap { .. } => "resource_cap",
            Error::DegenerateFit(_) => "degenerate_fit",
            Error::Empty(_) => "empty",
            Error::Parse(_) => "parse",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}
