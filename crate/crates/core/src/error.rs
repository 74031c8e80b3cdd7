use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("bound exceeded: {0}")]
    BoundExceeded(String),

    #[error("backend mismatch: {0}")]
    BackendMismatch(String),

    #[error("curve discontinuous: {0}")]
    Discontinuous(String),

    #[error("not in fixed-point algebra: beta weight {weight} mod {modulus}")]
    NotFixed { weight: i64, modulus: i64 },

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
