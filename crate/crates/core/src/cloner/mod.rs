//! The cloner's amplitude function and the error laws it induces.
//!
//! The ancilla pair is prepared in `|χ⟩ = ∬ f(x,p) |ψ(x,−p)⟩`. After the
//! cloning unitary, copy `a` carries displacement errors distributed as
//! `|f|²` and copy `b` as `|g|²`, where `g` is the symplectic Fourier
//! transform
//!
//! ```text
//! g(x,p) = (1/2π) ∬ e^{i(p x' − x p')} f(x',p') dx' dp'.
//! ```
//!
//! Two representations are supported: a closed-form Gaussian family
//! parametrized by copy `a`'s variances, and an arbitrary amplitude sampled
//! on a square grid.

mod csv;
mod sampled;

use crate::error::{invalid, Result};
use crate::gaussian::ShiftDistribution;

pub use csv::{read_amplitude_csv, AmplitudeCsv};
pub(crate) use csv::write_amplitude_csv;
pub use sampled::{ErrorMoments, SampledAmplitude};

/// Which output of the cloner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Output {
    A,
    B,
}

/// Product-form Gaussian amplitude `f(x,p) = q₁(x)·q₂(p)` whose modulus
/// squared has variances `va_x`, `va_p`.
///
/// Gaussian amplitudes are minimum-uncertainty, so copy `b`'s variances
/// follow from the Fourier-pair width relation: `vb_x = 1/(4·va_p)` and
/// `vb_p = 1/(4·va_x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticGaussian {
    va_x: f64,
    va_p: f64,
    // copy-b variances, fixed at construction so that taking the dual is an
    // exact swap
    vb_x: f64,
    vb_p: f64,
}

impl AnalyticGaussian {
    /// Zero or infinite variances correspond to the non-normalizable
    /// position-state and plane-wave cloners and are rejected.
    pub fn new(va_x: f64, va_p: f64) -> Result<Self> {
        for (name, v) in [("va_x", va_x), ("va_p", va_p)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(invalid(name, format!("must be finite and > 0, got {v}")));
            }
        }
        Ok(Self {
            va_x,
            va_p,
            vb_x: 1.0 / (4.0 * va_p),
            vb_p: 1.0 / (4.0 * va_x),
        })
    }

    /// Amplitude with the roles of the two copies exchanged.
    pub fn dual(&self) -> Self {
        Self {
            va_x: self.vb_x,
            va_p: self.vb_p,
            vb_x: self.va_x,
            vb_p: self.va_p,
        }
    }

    pub fn va_x(&self) -> f64 {
        self.va_x
    }

    pub fn va_p(&self) -> f64 {
        self.va_p
    }

    pub fn vb_x(&self) -> f64 {
        self.vb_x
    }

    pub fn vb_p(&self) -> f64 {
        self.vb_p
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ClonerSpec {
    Analytic(AnalyticGaussian),
    Sampled(SampledAmplitude),
}

/// Products appearing in the no-cloning uncertainty relations
/// `Δx_a²·Δp_b² ≥ 1/4` and `Δx_b²·Δp_a² ≥ 1/4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UncertaintyReport {
    pub prod_xa_pb: f64,
    pub prod_xb_pa: f64,
}

impl UncertaintyReport {
    pub fn min(&self) -> f64 {
        self.prod_xa_pb.min(self.prod_xb_pa)
    }

    pub fn satisfied(&self, tol: f64) -> bool {
        self.min() >= 0.25 - tol
    }
}

/// The symmetric cloner `f = π^{−1/2} e^{−(x²+p²)/2}`: both copies get
/// variance-1/2 errors on every quadrature.
pub fn universal_cloner() -> ClonerSpec {
    ClonerSpec::Analytic(AnalyticGaussian {
        va_x: 0.5,
        va_p: 0.5,
        vb_x: 0.5,
        vb_p: 0.5,
    })
}

/// Cloner matched to squeezed states of parameter `sigma`:
/// `f ∝ exp(−x²/(2σ²) − σ²p²/2)`, giving errors of variance `σ²/2` on `x`
/// and `1/(2σ²)` on `p` for both copies.
pub fn squeezed_cloner(sigma: f64) -> Result<ClonerSpec> {
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(invalid("sigma", format!("must be > 0, got {sigma}")));
    }
    let s2 = sigma * sigma;
    Ok(ClonerSpec::Analytic(AnalyticGaussian::new(s2 / 2.0, 1.0 / (2.0 * s2))?))
}

/// Amplitude `g` governing copy `b`. Applying it twice returns the input.
pub fn dual_amplitude(spec: &ClonerSpec) -> Result<ClonerSpec> {
    match spec {
        ClonerSpec::Analytic(a) => Ok(ClonerSpec::Analytic(a.dual())),
        ClonerSpec::Sampled(s) => Ok(ClonerSpec::Sampled(s.dual()?)),
    }
}

/// Position and momentum variances of the given copy's error law.
pub fn marginals(spec: &ClonerSpec, copy: Output) -> Result<ShiftDistribution> {
    match (spec, copy) {
        (ClonerSpec::Analytic(a), Output::A) => ShiftDistribution::new(a.va_x, a.va_p),
        (ClonerSpec::Analytic(a), Output::B) => ShiftDistribution::new(a.vb_x(), a.vb_p()),
        (ClonerSpec::Sampled(s), _) => {
            let m = error_moments(s, copy)?;
            ShiftDistribution::new(m.var_x, m.var_p)
        }
    }
}

fn error_moments(s: &SampledAmplitude, copy: Output) -> Result<ErrorMoments> {
    Ok(match copy {
        Output::A => s.error_moments(),
        Output::B => s.dual()?.error_moments(),
    })
}

pub fn uncertainty_products(spec: &ClonerSpec) -> Result<UncertaintyReport> {
    let a = marginals(spec, Output::A)?;
    let b = marginals(spec, Output::B)?;
    Ok(UncertaintyReport {
        prod_xa_pb: a.vx() * b.vp(),
        prod_xb_pa: b.vx() * a.vp(),
    })
}

/// Variance of the error on the rotated quadrature `u = c·x + d·p`.
/// Includes the `x`–`p` covariance of sampled error laws.
pub fn rotated_error_variance(spec: &ClonerSpec, c: f64, d: f64, copy: Output) -> Result<f64> {
    if ((c * c + d * d) - 1.0).abs() > 1e-9 {
        return Err(invalid("(c, d)", format!("c² + d² must be 1, got {}", c * c + d * d)));
    }
    match spec {
        ClonerSpec::Analytic(_) => Ok(marginals(spec, copy)?.variance_along(c, d)),
        ClonerSpec::Sampled(s) => {
            let m = error_moments(s, copy)?;
            Ok(c * c * m.var_x + d * d * m.var_p + 2.0 * c * d * m.cov_xp)
        }
    }
}
