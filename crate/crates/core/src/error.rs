use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("index {index} out of range (limit {limit})")]
    OutOfRange { index: usize, limit: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("covariance matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("covariance violates the uncertainty principle (smallest symplectic eigenvalue {0})")]
    Unphysical(f64),

    #[error("covariance matrix is not positive definite")]
    DegenerateCovariance,

    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(f64),

    #[error("{n}^{k} amplitudes exceeds the cap of {cap}")]
    TooLarge { n: usize, k: u32, cap: usize },

    #[error("noise kernel too wide for the grid on the {axis} axis: 4σ = {four_sigma} exceeds the half-extent {half_extent}")]
    KernelTooWide {
        axis: &'static str,
        four_sigma: f64,
        half_extent: f64,
    },

    #[error("precision loss: normalization drifted by {0:e}")]
    PrecisionLoss(f64),

    #[error("parse error on line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
