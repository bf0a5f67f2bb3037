use crate::error::{invalid, Error, Result};

use super::{GaussianState, ShiftDistribution};

/// Fidelity `⟨α|ρ|α⟩` of a coherent state with its noisy copy, where `ρ` is
/// the coherent state pushed through a Gaussian shift channel.
///
/// Using `|⟨α|α'⟩|² = exp(−|α−α'|²)` with `α − α' = (x + ip)/√2`, the
/// fidelity is `∫P(x,p)·e^{−(x²+p²)/2}`, which for independent Gaussian
/// shifts is `1/√((1+vx)(1+vp))`. It does not depend on `α`.
pub fn fidelity_coherent_vs_noisy(_alpha: (f64, f64), noise: &ShiftDistribution) -> f64 {
    1.0 / ((1.0 + noise.vx()) * (1.0 + noise.vp())).sqrt()
}

/// Same as [`fidelity_coherent_vs_noisy`] for squeezed states of parameter
/// `sigma`; the overlap kernel becomes `exp(−x²/(2σ²) − σ²p²/2)`.
pub fn fidelity_squeezed_vs_noisy(sigma: f64, noise: &ShiftDistribution) -> Result<f64> {
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(invalid("sigma", format!("must be > 0, got {sigma}")));
    }
    let s2 = sigma * sigma;
    Ok(1.0 / ((1.0 + noise.vx() / s2) * (1.0 + noise.vp() * s2)).sqrt())
}

/// `Tr(ρ₁ρ₂)` for two Gaussian states of the same number of modes:
/// `exp(−½ dᵀ(V₁+V₂)⁻¹d) / √det(V₁+V₂)` with `d` the difference of means.
/// When one of the states is pure this is the fidelity.
pub fn gaussian_overlap(a: &GaussianState, b: &GaussianState) -> Result<f64> {
    if a.n_modes() != b.n_modes() {
        return Err(Error::DimensionMismatch {
            expected: a.n_modes(),
            found: b.n_modes(),
        });
    }
    let sum = a.cov() + b.cov();
    let d = a.mean() - b.mean();
    let chol = sum.cholesky().ok_or(Error::DegenerateCovariance)?;
    let det = chol.determinant();
    let quad = d.dot(&chol.solve(&d));
    Ok((-0.5 * quad).exp() / det.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Tensor-product trapezoid rule for `∫∫ P(x,p)·K(x,p) dx dp` over a
    /// box of ±`half` with `m` points per axis. Independent of the closed
    /// forms above.
    fn quadrature(
        vx: f64,
        vp: f64,
        kernel: impl Fn(f64, f64) -> f64,
    ) -> f64 {
        let (half, m) = (15.0, 1501);
        let h = 2.0 * half / (m - 1) as f64;
        let gauss = |x: f64, v: f64| (-x * x / (2.0 * v)).exp() / (2.0 * std::f64::consts::PI * v).sqrt();
        let mut acc = 0.0;
        for i in 0..m {
            let x = -half + i as f64 * h;
            let px = gauss(x, vx);
            if px == 0.0 {
                continue;
            }
            for j in 0..m {
                let p = -half + j as f64 * h;
                acc += px * gauss(p, vp) * kernel(x, p);
            }
        }
        acc * h * h
    }

    #[test]
    fn coherent_fidelity_examples() {
        let f = fidelity_coherent_vs_noisy((0.3, -1.2), &ShiftDistribution::universal());
        assert!((f - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(fidelity_coherent_vs_noisy((5.0, 1.0), &ShiftDistribution::none()), 1.0);

        // frozen from the quadrature oracle below
        let unit = ShiftDistribution::new(1.0, 1.0).unwrap();
        let oracle = quadrature(1.0, 1.0, |x, p| (-(x * x + p * p) / 2.0).exp());
        assert!((oracle - 0.5).abs() < 1e-10, "oracle {oracle}");
        assert!((fidelity_coherent_vs_noisy((0.0, 0.0), &unit) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn squeezed_fidelity_examples() {
        let f = fidelity_squeezed_vs_noisy(1.0, &ShiftDistribution::universal()).unwrap();
        assert!((f - 2.0 / 3.0).abs() < 1e-15);
        let matched = ShiftDistribution::new(2.0, 0.125).unwrap();
        let f = fidelity_squeezed_vs_noisy(2.0, &matched).unwrap();
        assert!((f - 2.0 / 3.0).abs() < 1e-15);

        // universal cloner on σ = 2 squeezed states
        let sigma: f64 = 2.0;
        let oracle = quadrature(0.5, 0.5, |x, p| {
            (-x * x / (2.0 * sigma * sigma) - sigma * sigma * p * p / 2.0).exp()
        });
        let f = fidelity_squeezed_vs_noisy(sigma, &ShiftDistribution::universal()).unwrap();
        assert!((oracle - 0.544_331_053_951_817_4).abs() < 1e-9, "oracle {oracle}");
        assert!((f - 0.544_331_053_951_817_4).abs() < 1e-15);

        assert!(fidelity_squeezed_vs_noisy(0.0, &matched).is_err());
        assert!(fidelity_squeezed_vs_noisy(-2.0, &matched).is_err());
    }

    #[test]
    fn closed_form_matches_general_overlap() {
        for (re, im, vx, vp) in [(0.0, 0.0, 0.5, 0.5), (1.3, -0.2, 0.1, 1.7), (-2.0, 2.5, 2.0, 0.0)] {
            let noise = ShiftDistribution::new(vx, vp).unwrap();
            let input = GaussianState::coherent(re, im);
            let out = input.apply_cloner_noise(&noise).unwrap();
            let direct = gaussian_overlap(&input, &out).unwrap();
            assert!((direct - fidelity_coherent_vs_noisy((re, im), &noise)).abs() < 1e-14);
        }
        let sq = GaussianState::squeezed(0.5, 0.7, 0.1).unwrap();
        let noise = ShiftDistribution::new(0.3, 0.9).unwrap();
        let direct = gaussian_overlap(&sq, &sq.apply_cloner_noise(&noise).unwrap()).unwrap();
        assert!((direct - fidelity_squeezed_vs_noisy(0.5, &noise).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn coherent_overlap_identity() {
        // |⟨α|α'⟩|² = exp(−|α−α'|²)
        let (a, b) = ((0.4, -0.3), (-1.0, 0.8));
        let ov = gaussian_overlap(
            &GaussianState::coherent(a.0, a.1),
            &GaussianState::coherent(b.0, b.1),
        )
        .unwrap();
        let d2 = (a.0 - b.0).powi(2) + (a.1 - b.1).powi(2);
        assert!((ov - (-d2).exp()).abs() < 1e-14);
    }

    #[test]
    fn fidelity_is_strictly_decreasing_in_each_variance() {
        let mut prev = 1.0 + 1e-9;
        for k in 0..50 {
            let v = k as f64 * 0.1;
            let f = fidelity_coherent_vs_noisy((0.0, 0.0), &ShiftDistribution::new(v, 0.3).unwrap());
            assert!(f < prev);
            prev = f;
        }
        let mut prev = 1.0 + 1e-9;
        for k in 0..50 {
            let v = k as f64 * 0.1;
            let f = fidelity_coherent_vs_noisy((0.0, 0.0), &ShiftDistribution::new(0.3, v).unwrap());
            assert!(f < prev);
            prev = f;
        }
    }
}
