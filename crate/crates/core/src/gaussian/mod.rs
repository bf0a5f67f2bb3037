//! Analytic Gaussian phase-space engine.
//!
//! The cloner acts on a single mode as an additive Gaussian noise channel:
//! the output mean is unchanged and the covariance grows by the copy's
//! shift-error variances. At the Wigner-function level this is a
//! convolution with the error law `P(x, p)`.

mod fidelity;
mod state;
mod wigner;

pub use fidelity::{fidelity_coherent_vs_noisy, fidelity_squeezed_vs_noisy, gaussian_overlap};
pub use state::{GaussianState, ShiftDistribution};
pub use wigner::{convolve_wigner, wigner_of_gaussian, GridSpec, Moments, WignerGrid};
