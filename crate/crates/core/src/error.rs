use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A value left the exact 64-bit range. Never wrapped.
    #[error("arithmetic overflow: {0}")]
    Overflow(String),
    /// An argument outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),
    #[error(transparent)]
    Rule(#[from] RuleError),
}

impl Error {
    pub(crate) fn overflow(context: impl Into<String>) -> Self {
        Error::Overflow(context.into())
    }

    pub(crate) fn domain(context: impl Into<String>) -> Self {
        Error::Domain(context.into())
    }
}

/// Problems with a replication rule, either from its text or its seeds.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("syntax error at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("unknown identifier `{name}` at byte {pos}")]
    UnknownIdentifier { name: String, pos: usize },
    #[error("arity mismatch: {0}")]
    ArityMismatch(String),
}
