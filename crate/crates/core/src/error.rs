use thiserror::Error;

/// Errors raised by the computational core.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument violated an operation's precondition.
    #[error("domain error: {0}")]
    Domain(String),
    /// A spec file field is missing, malformed or violates an invariant.
    #[error("{field}: {message}")]
    Spec { field: String, message: String },
    /// Two action matrices that must commute do not.
    #[error("actions[{0}] and actions[{1}] do not commute")]
    NonCommuting(usize, usize),
    /// An oracle or enumeration was asked to exceed one of its size bounds.
    #[error("refused: {what} exceeds the bound {bound}")]
    BoundExceeded { what: String, bound: String },
    /// A window-stabilized invariant did not stabilize.
    #[error("invariant did not stabilize over a window of {window} primes ({detail}); retry with a larger window")]
    WindowUnstable { window: usize, detail: String },
    /// The operation does not apply to this kind of input.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// An internal consistency check failed.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
