use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument fell outside the domain where the operation is defined.
    #[error("{what} out of range: {detail}")]
    Domain { what: &'static str, detail: String },

    /// A key ran out of bits before reaching an empty node.
    #[error("key #{index} ({label}) ran out of bits after {consumed} bits")]
    InsufficientBits {
        index: usize,
        label: String,
        consumed: usize,
    },

    /// The operation is only defined for a particular lifetime family.
    #[error("unsupported: {0}")]
    Unsupported(&'static str),

    /// Malformed textual input.
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(what: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain {
        what,
        detail: detail.into(),
    }
}
