use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{invalid, Error, Result};
use crate::fourier::{CenteredDft, Sign};

use super::AnalyticGaussian;

const NORM_TOL: f64 = 1e-9;
const DRIFT_TOL: f64 = 1e-6;

/// Mean and covariance of an error law `P(x, p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorMoments {
    pub mean_x: f64,
    pub mean_p: f64,
    pub var_x: f64,
    pub var_p: f64,
    pub cov_xp: f64,
}

/// Cloning amplitude sampled at `x_j = (j − ⌊n/2⌋)·δ`, `p_k = (k − ⌊n/2⌋)·δ`,
/// stored row-major with `x` as the slow index and normalized so that
/// `Σ|f|²·δ² = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledAmplitude {
    n: usize,
    delta: f64,
    amps: Vec<Complex64>,
}

impl SampledAmplitude {
    /// Grid spacing on which the symplectic Fourier transform maps the grid
    /// onto itself.
    pub fn self_dual_spacing(n: usize) -> f64 {
        (2.0 * PI / n as f64).sqrt()
    }

    pub fn new(n: usize, delta: f64, amps: Vec<Complex64>) -> Result<Self> {
        Self::check_shape(n, delta, &amps)?;
        let norm = norm_sq(&amps) * delta * delta;
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { n, delta, amps })
    }

    /// Rescales `amps` to unit norm.
    pub fn normalized(n: usize, delta: f64, mut amps: Vec<Complex64>) -> Result<Self> {
        Self::check_shape(n, delta, &amps)?;
        let norm = norm_sq(&amps) * delta * delta;
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::NotNormalized(norm));
        }
        let scale = 1.0 / norm.sqrt();
        amps.iter_mut().for_each(|a| *a *= scale);
        Ok(Self { n, delta, amps })
    }

    fn check_shape(n: usize, delta: f64, amps: &[Complex64]) -> Result<()> {
        if n == 0 {
            return Err(invalid("n", "grid size must be positive"));
        }
        if !(delta.is_finite() && delta > 0.0) {
            return Err(invalid("delta", format!("must be > 0, got {delta}")));
        }
        if amps.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: amps.len(),
            });
        }
        Ok(())
    }

    /// Samples `amplitude(x, p)` on the self-dual grid of size `n` and
    /// normalizes.
    pub fn from_fn(n: usize, amplitude: impl Fn(f64, f64) -> Complex64) -> Result<Self> {
        let delta = Self::self_dual_spacing(n);
        let c = (n / 2) as f64;
        let mut amps = Vec::with_capacity(n * n);
        for j in 0..n {
            let x = (j as f64 - c) * delta;
            for k in 0..n {
                let p = (k as f64 - c) * delta;
                amps.push(amplitude(x, p));
            }
        }
        Self::normalized(n, delta, amps)
    }

    /// Samples a member of the analytic Gaussian family.
    pub fn from_analytic(spec: &AnalyticGaussian, n: usize) -> Result<Self> {
        let (vx, vp) = (spec.va_x(), spec.va_p());
        Self::from_fn(n, |x, p| {
            Complex64::new((-x * x / (4.0 * vx) - p * p / (4.0 * vp)).exp(), 0.0)
        })
    }

    /// Random non-Gaussian amplitude: a superposition of one to three
    /// Gaussian packets with random centers, widths, phase gradients and
    /// complex weights. Every packet stays well inside the grid in both the
    /// direct and the dual domain for `n ≥ 64`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Self {
        struct Packet {
            weight: Complex64,
            x0: f64,
            p0: f64,
            vx: f64,
            vp: f64,
            kx: f64,
            kp: f64,
        }
        let count = rng.random_range(1..=3);
        let packets: Vec<Packet> = (0..count)
            .map(|_| Packet {
                weight: Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
                x0: rng.random_range(-1.5..1.5),
                p0: rng.random_range(-1.5..1.5),
                vx: rng.random_range(0.2..1.5),
                vp: rng.random_range(0.2..1.5),
                kx: rng.random_range(-1.5..1.5),
                kp: rng.random_range(-1.5..1.5),
            })
            .collect();
        Self::from_fn(n, |x, p| {
            packets
                .iter()
                .map(|pk| {
                    let (u, v) = (x - pk.x0, p - pk.p0);
                    let env = (-u * u / (4.0 * pk.vx) - v * v / (4.0 * pk.vp)).exp();
                    pk.weight * Complex64::from_polar(env, pk.kx * x + pk.kp * p)
                })
                .sum()
        })
        .expect("random packet superposition has nonzero norm")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amp(&self, j: usize, k: usize) -> Complex64 {
        self.amps[j * self.n + k]
    }

    pub fn coord(&self, j: usize) -> f64 {
        (j as f64 - (self.n / 2) as f64) * self.delta
    }

    pub fn norm(&self) -> f64 {
        norm_sq(&self.amps) * self.delta * self.delta
    }

    /// Symplectic Fourier transform
    /// `g(x,p) = (1/2π) ∬ e^{i(p x' − x p')} f(x',p')`
    /// evaluated on the same grid. The `x'` sum feeds the `p` index of `g`
    /// with a `+` phase; the `p'` sum feeds the `x` index with a `−` phase.
    pub fn dual(&self) -> Result<Self> {
        let n = self.n;
        let expected = Self::self_dual_spacing(n);
        if ((self.delta - expected) / expected).abs() > 1e-12 {
            return Err(invalid(
                "delta",
                format!("dual needs spacing √(2π/n) = {expected}, got {}", self.delta),
            ));
        }
        let plus = CenteredDft::new(n, Sign::Plus);
        let minus = CenteredDft::new(n, Sign::Minus);

        // columns: transform over x' (fixed p' index) → index k of g's p axis
        let mut tmp = self.amps.clone();
        let mut col = vec![Complex64::new(0.0, 0.0); n];
        for kp in 0..n {
            for j in 0..n {
                col[j] = tmp[j * n + kp];
            }
            plus.process(&mut col);
            for k in 0..n {
                tmp[k * n + kp] = col[k];
            }
        }
        // rows: transform over p' → index j of g's x axis
        for row in tmp.chunks_mut(n) {
            minus.process(row);
        }
        // tmp[k][j] holds g(j, k)
        let mut amps = vec![Complex64::new(0.0, 0.0); n * n];
        for k in 0..n {
            for j in 0..n {
                amps[j * n + k] = tmp[k * n + j];
            }
        }
        let norm = norm_sq(&amps) * self.delta * self.delta;
        if (norm - self.norm()).abs() > DRIFT_TOL {
            return Err(Error::PrecisionLoss(norm - self.norm()));
        }
        Self::normalized(n, self.delta, amps)
    }

    /// Moments of `|f|²` treated as a density on the grid.
    pub fn error_moments(&self) -> ErrorMoments {
        let n = self.n;
        let (mut m0, mut mx, mut mp, mut mxx, mut mpp, mut mxp) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
        for j in 0..n {
            let x = self.coord(j);
            for k in 0..n {
                let p = self.coord(k);
                let w = self.amp(j, k).norm_sqr();
                m0 += w;
                mx += w * x;
                mp += w * p;
                mxx += w * x * x;
                mpp += w * p * p;
                mxp += w * x * p;
            }
        }
        let (mean_x, mean_p) = (mx / m0, mp / m0);
        ErrorMoments {
            mean_x,
            mean_p,
            var_x: mxx / m0 - mean_x * mean_x,
            var_p: mpp / m0 - mean_p * mean_p,
            cov_xp: mxp / m0 - mean_x * mean_p,
        }
    }
}

fn norm_sq(amps: &[Complex64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn max_diff(a: &SampledAmplitude, b: &SampledAmplitude) -> f64 {
        a.amps()
            .iter()
            .zip(b.amps())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    /// Direct O(n⁴) evaluation of the symplectic transform.
    fn naive_dual(s: &SampledAmplitude) -> Vec<Complex64> {
        let n = s.n();
        let d2 = s.delta() * s.delta();
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for j in 0..n {
            for k in 0..n {
                let (x, p) = (s.coord(j), s.coord(k));
                let mut acc = Complex64::new(0.0, 0.0);
                for jj in 0..n {
                    for kk in 0..n {
                        let (xx, pp) = (s.coord(jj), s.coord(kk));
                        acc += Complex64::from_polar(1.0, p * xx - x * pp) * s.amp(jj, kk);
                    }
                }
                out[j * n + k] = acc * d2 / (2.0 * PI);
            }
        }
        out
    }

    #[test]
    fn dual_matches_direct_kernel() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = SampledAmplitude::random(&mut rng, 16);
        let d = s.dual().unwrap();
        let naive = naive_dual(&s);
        for (a, b) in d.amps().iter().zip(&naive) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn dual_is_an_involution() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in [64, 65, 96] {
            let s = SampledAmplitude::random(&mut rng, n);
            let twice = s.dual().unwrap().dual().unwrap();
            assert!(max_diff(&s, &twice) < 1e-9, "n={n}");
            assert!((s.dual().unwrap().norm() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn sampled_universal_is_self_dual() {
        let s = SampledAmplitude::from_analytic(&AnalyticGaussian::new(0.5, 0.5).unwrap(), 64).unwrap();
        assert!(max_diff(&s, &s.dual().unwrap()) < 1e-12);
        let f0 = s.amp(32, 32);
        assert!((f0.re - 1.0 / PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn construction_checks() {
        let n = 4;
        let d = SampledAmplitude::self_dual_spacing(n);
        assert!(SampledAmplitude::new(n, d, vec![Complex64::new(1.0, 0.0); 16]).is_err());
        assert!(SampledAmplitude::new(n, d, vec![Complex64::new(1.0, 0.0); 3]).is_err());
        assert!(SampledAmplitude::normalized(n, d, vec![Complex64::new(0.0, 0.0); 16]).is_err());
        let ok = SampledAmplitude::normalized(n, d, vec![Complex64::new(1.0, 0.0); 16]).unwrap();
        assert!((ok.norm() - 1.0).abs() < 1e-12);
        // arbitrary spacing is allowed for moments but not for the dual
        let off = SampledAmplitude::normalized(n, 0.1, vec![Complex64::new(1.0, 0.0); 16]).unwrap();
        assert!(off.dual().is_err());
    }
}
