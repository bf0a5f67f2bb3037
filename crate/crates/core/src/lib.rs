//! Simulation engines for universal (Gaussian) cloning of continuous quantum
//! variables.
//!
//! Three layers live here:
//!
//! * [`gaussian`]: the analytic phase-space engine. Gaussian states are a mean
//!   vector plus covariance matrix, the cloner acts as an additive-noise
//!   channel, and Wigner functions can be sampled on grids and convolved.
//! * [`cloner`]: the cloner's amplitude function `f(x, p)`, its symplectic
//!   Fourier dual `g`, the error laws of the two copies and the no-cloning
//!   uncertainty products.
//! * [`discrete`]: an exact finite model over `Z_N` used as a brute-force
//!   oracle. Bell states, Weyl displacements, the ancilla state and the
//!   three-variable cloning permutation are all represented exactly.
//!
//! Units: `ħ = 1`, `[x̂, p̂] = i`, `â = (x̂ + ip̂)/√2`, so the vacuum has
//! quadrature variance 1/2.

pub mod cloner;
pub mod discrete;
mod error;
pub mod fourier;
pub mod gaussian;

pub use error::{Error, Result};

/// Engine version, recorded in exported result metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
