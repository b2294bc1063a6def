use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid field parameters: {0}")]
    InvalidField(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("ghost vector is not integral at level {level} (p^{level} does not divide the remainder)")]
    Divisibility { level: usize },
    #[error("the zero series has no valuation")]
    ZeroValuation,
    #[error("not a unit: {0}")]
    NotAUnit(String),
    #[error("not a principal unit: {0}")]
    NotPrincipalUnit(String),
    #[error("precision window too small: {0}")]
    WindowTooSmall(String),
    #[error("unsupported symbol pair: {0}")]
    UnsupportedPair(String),
    #[error("bad ramification index ({0}, {1})")]
    BadIndex(i64, i64),
    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
