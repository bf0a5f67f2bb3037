use nalgebra::{DMatrix, DVector};

use crate::error::{invalid, Error, Result};

const SYMMETRY_TOL: f64 = 1e-12;
const PHYSICALITY_TOL: f64 = 1e-9;

/// Zero-mean, independent Gaussian shift errors on position and momentum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftDistribution {
    vx: f64,
    vp: f64,
}

impl ShiftDistribution {
    pub fn new(vx: f64, vp: f64) -> Result<Self> {
        if !(vx.is_finite() && vx >= 0.0) {
            return Err(invalid("vx", format!("must be finite and >= 0, got {vx}")));
        }
        if !(vp.is_finite() && vp >= 0.0) {
            return Err(invalid("vp", format!("must be finite and >= 0, got {vp}")));
        }
        Ok(Self { vx, vp })
    }

    /// Error law of either copy of the universal cloner.
    pub const fn universal() -> Self {
        Self { vx: 0.5, vp: 0.5 }
    }

    pub const fn none() -> Self {
        Self { vx: 0.0, vp: 0.0 }
    }

    pub fn vx(&self) -> f64 {
        self.vx
    }

    pub fn vp(&self) -> f64 {
        self.vp
    }

    /// Law of two independent shifts applied one after the other.
    pub fn then(&self, other: &ShiftDistribution) -> ShiftDistribution {
        ShiftDistribution {
            vx: self.vx + other.vx,
            vp: self.vp + other.vp,
        }
    }

    /// Variance of the shift of `u = c·x + d·p`.
    pub fn variance_along(&self, c: f64, d: f64) -> f64 {
        c * c * self.vx + d * d * self.vp
    }
}

/// Gaussian state of `n` bosonic modes: quadrature means ordered
/// `(x₁, p₁, x₂, p₂, …)` and the symmetrized covariance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    mean: DVector<f64>,
    cov: DMatrix<f64>,
}

impl GaussianState {
    pub fn new(mean: DVector<f64>, cov: DMatrix<f64>) -> Result<Self> {
        let dim = mean.len();
        if dim == 0 || !dim.is_multiple_of(2) {
            return Err(invalid("mean", format!("length must be a positive even number, got {dim}")));
        }
        if cov.nrows() != dim || cov.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: cov.nrows().max(cov.ncols()),
            });
        }
        let asym = (&cov - cov.transpose()).amax();
        if asym > SYMMETRY_TOL {
            return Err(Error::NotSymmetric(asym));
        }
        let state = Self { mean, cov };
        let smallest = state
            .symplectic_eigenvalues()
            .ok_or(Error::Unphysical(f64::NAN))?
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if smallest < 0.5 - PHYSICALITY_TOL {
            return Err(Error::Unphysical(smallest));
        }
        Ok(state)
    }

    pub fn vacuum(n_modes: usize) -> Self {
        Self {
            mean: DVector::zeros(2 * n_modes),
            cov: DMatrix::identity(2 * n_modes, 2 * n_modes) * 0.5,
        }
    }

    /// Coherent state `|α⟩`, the eigenstate of `â = (x̂ + ip̂)/√2`.
    pub fn coherent(alpha_re: f64, alpha_im: f64) -> Self {
        let s = std::f64::consts::SQRT_2;
        Self {
            mean: DVector::from_vec(vec![s * alpha_re, s * alpha_im]),
            cov: DMatrix::identity(2, 2) * 0.5,
        }
    }

    /// Quadrature-squeezed state `|β⟩`, the eigenstate of
    /// `b̂ = (x̂/σ + iσp̂)/√2`.
    pub fn squeezed(sigma: f64, beta_re: f64, beta_im: f64) -> Result<Self> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(invalid("sigma", format!("must be > 0, got {sigma}")));
        }
        let s = std::f64::consts::SQRT_2;
        Ok(Self {
            mean: DVector::from_vec(vec![s * sigma * beta_re, s * beta_im / sigma]),
            cov: DMatrix::from_diagonal(&DVector::from_vec(vec![
                sigma * sigma / 2.0,
                1.0 / (2.0 * sigma * sigma),
            ])),
        })
    }

    pub fn n_modes(&self) -> usize {
        self.mean.len() / 2
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    /// Phase-space displacement of one mode. The global phase of the
    /// displacement operator does not survive at the density-operator level
    /// and is not tracked.
    pub fn displace(&self, mode: usize, dx: f64, dp: f64) -> Result<Self> {
        if mode >= self.n_modes() {
            return Err(Error::OutOfRange {
                index: mode,
                limit: self.n_modes(),
            });
        }
        let mut out = self.clone();
        out.mean[2 * mode] += dx;
        out.mean[2 * mode + 1] += dp;
        Ok(out)
    }

    /// Output of one copy of the cloner for a single-mode Gaussian input:
    /// the mixture of randomly displaced inputs, which is again Gaussian
    /// with the noise variances added to the covariance.
    pub fn apply_cloner_noise(&self, noise: &ShiftDistribution) -> Result<Self> {
        if self.n_modes() != 1 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: self.n_modes(),
            });
        }
        self.apply_noise_to_mode(0, noise)
    }

    pub fn apply_noise_to_mode(&self, mode: usize, noise: &ShiftDistribution) -> Result<Self> {
        if mode >= self.n_modes() {
            return Err(Error::OutOfRange {
                index: mode,
                limit: self.n_modes(),
            });
        }
        let mut out = self.clone();
        out.cov[(2 * mode, 2 * mode)] += noise.vx();
        out.cov[(2 * mode + 1, 2 * mode + 1)] += noise.vp();
        Ok(out)
    }

    /// Symplectic eigenvalues in ascending order, or `None` when the
    /// covariance is not positive definite.
    ///
    /// With `S = V^{1/2}` and the symplectic form `Ω`, the matrix `SΩS` is
    /// antisymmetric with eigenvalues `±iν_k`, so `(SΩS)ᵀ(SΩS)` has each
    /// `ν_k²` as a doubly degenerate eigenvalue.
    pub fn symplectic_eigenvalues(&self) -> Option<Vec<f64>> {
        let dim = self.cov.nrows();
        let eig = self.cov.clone().symmetric_eigen();
        if eig.eigenvalues.iter().any(|&l| l <= 0.0) {
            return None;
        }
        let root = &eig.eigenvectors
            * DMatrix::from_diagonal(&eig.eigenvalues.map(f64::sqrt))
            * eig.eigenvectors.transpose();
        let mut omega = DMatrix::zeros(dim, dim);
        for m in 0..dim / 2 {
            omega[(2 * m, 2 * m + 1)] = 1.0;
            omega[(2 * m + 1, 2 * m)] = -1.0;
        }
        let a = &root * omega * &root;
        let mut sq: Vec<f64> = (a.transpose() * &a)
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .map(|&l| l.max(0.0).sqrt())
            .collect();
        sq.sort_by(f64::total_cmp);
        Some(sq.into_iter().step_by(2).collect())
    }
}
