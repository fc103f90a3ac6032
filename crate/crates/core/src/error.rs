use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("carrier mismatch: {0}")]
    Carrier(String),

    #[error("degenerate ray: {0}")]
    DegenerateRay(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid permutation: {0}")]
    Permutation(String),

    #[error("decode error: {0}")]
    Decode(String),

    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("type error: {0}")]
    Type(#[from] crate::mll::TypeError),

    #[error("compile error: {0}")]
    Compile(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Decode(e.to_string())
    }
}
