use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("not a density matrix: {0}")]
    NotDensityMatrix(String),

    #[error("dimension {dim} exceeds the configured cap {cap}")]
    DimensionCap { dim: u128, cap: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("monotone function {0} is not regular (f(0) = 0)")]
    NotRegular(String),

    #[error("spectrum is not integer on the support of the state: {0}")]
    NonIntegerSpectrum(String),

    #[error("energy gaps are not commensurate; the state has no finite period")]
    NoFinitePeriod,

    #[error("sequence has a zero leading entry")]
    ZeroLeadingEntry,

    #[error("positivity condition 1 - eps - lambda/alpha^2 > 0 fails at eps = {epsilon}; it holds only for eps < {threshold:.6e}")]
    EpsilonTooLarge { epsilon: f64, threshold: f64 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("states are not orthogonal (overlap {0:.3e})")]
    NotOrthogonal(f64),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
