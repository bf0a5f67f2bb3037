//! Exact finite model of the cloner over `Z_N`.
//!
//! Each continuous variable becomes an `N`-level system with position basis
//! `|0⟩ … |N−1⟩`. The Weyl operator `D(a, b)|x⟩ = ω^{b·x}|x + a⟩`,
//! `ω = e^{2πi/N}`, stands in for the displacement `e^{−ixp̂}e^{ipx̂}`, and
//! the EPR states become the generalized Bell states. Everything the
//! continuum argument relies on (orthonormality, closure, the shift
//! property, the Fourier duality of the two copies) holds exactly here, so
//! this module serves as a brute-force oracle for the analytic engine.
//!
//! The continuum embedding uses grid spacing `Δ = √(2π/N)` and centered
//! representatives in `(−N/2, N/2]`; group arithmetic itself stays in
//! `{0, …, N−1}`.

mod amplitude;
mod cloning;
mod density;
mod state;

pub use amplitude::{bell_state, chi_state, gaussian_amplitude, DiscreteAmplitude};
pub use cloning::{clone, cloner_apply, error_distribution, CloneSimulation, ErrorDistribution};
pub use density::DensityOperator;
pub use state::{centered, embedding_spacing, ModularState, DEFAULT_AMPLITUDE_CAP};

/// `⟨ψ|ρ|ψ⟩`.
pub fn fidelity(rho: &DensityOperator, psi: &ModularState) -> crate::Result<f64> {
    rho.fidelity(psi)
}
