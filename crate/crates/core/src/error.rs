use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimensions: {0}")]
    InvalidDims(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid subsystem selection: {0}")]
    InvalidSubset(String),

    #[error("not a valid state: {0}")]
    InvalidState(String),

    #[error("not an orthonormal set: {0}")]
    NotOrthonormal(String),

    #[error("degenerate lambda set: {0}")]
    DegenerateLambdas(String),

    #[error("invalid mixture weights: {0}")]
    InvalidWeights(String),

    #[error("empty subspace: {0}")]
    EmptySubspace(String),

    #[error("operator is not a projector: {0}")]
    NotProjector(String),

    #[error("{0} is not in the stabilizer subgroup (components must sum to zero)")]
    NotInStabilizer(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("internal check failed: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
