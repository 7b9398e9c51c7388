use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("insufficient field: roots need an ambient field of degree {needed_degree} over F_p")]
    InsufficientField { needed_degree: u32 },
    #[error("internal consistency check failed: {0}")]
    Consistency(String),
    #[error("zeta oracle inconsistency: {0}")]
    Oracle(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
