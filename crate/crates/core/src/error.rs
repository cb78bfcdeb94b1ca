use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("usage error: {0}")]
    Usage(String),

    #[error("capacity exceeded: {what} ({actual} > bound {bound})")]
    Capacity {
        what: String,
        actual: u128,
        bound: u128,
    },

    #[error("construction error: {0}")]
    Construction(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("matrix is not invertible (generator {index})")]
    NotInvertible { index: usize },

    #[error("expected order {expected}, computed {computed}")]
    OrderMismatch { expected: String, computed: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn capacity(what: impl Into<String>, actual: u128, bound: u128) -> Self {
        Error::Capacity {
            what: what.into(),
            actual,
            bound,
        }
    }
}
