use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("invalid rational `{0}`")]
    Rational(String),
    #[error("invalid power product `{0}`")]
    PowerProduct(String),
    #[error("invalid algebra spec: {0}")]
    AlgebraSpec(String),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("generators span Z-rank {achieved}, expected {expected}")]
    RankDeficient { achieved: usize, expected: usize },

    #[error("operands use different orders (`{0}` vs `{1}`)")]
    OrderMismatch(String, String),

    #[error("operands live in different algebras")]
    AlgebraMismatch,

    #[error("matrix is not positive definite: leading minor {minor} is not positive")]
    NotPositiveDefinite { minor: usize },

    #[error("enumeration exceeded the node budget of {budget}")]
    NodeBudget { budget: u64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("{0} is not a norm of an element of the algebra within the search range")]
    NotANorm(String),

    #[error("unknown order `{0}` (expected eisenstein, gaussian, hurwitz or j)")]
    UnknownOrder(String),

    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(String),

    #[error("invalid order: {0}")]
    InvalidOrder(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("bounds config has no row for dimension {0}")]
    MissingBound(u32),

    #[error("comparison of {0} and {1} is ambiguous at the guard precision")]
    Ambiguous(String, String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
