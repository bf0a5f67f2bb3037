use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::fourier::SameConvolver;

use super::{GaussianState, ShiftDistribution};

/// Rectangular sampling grid; both end points of each axis are included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub nx: usize,
    pub np: usize,
}

impl Default for GridSpec {
    /// 257×257 points over ±8 on both axes.
    fn default() -> Self {
        Self::symmetric(8.0, 257)
    }
}

impl GridSpec {
    pub fn symmetric(half_extent: f64, points: usize) -> Self {
        Self {
            x_min: -half_extent,
            x_max: half_extent,
            p_min: -half_extent,
            p_max: half_extent,
            nx: points,
            np: points,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.nx < 2 || self.np < 2 {
            return Err(invalid("grid", "need at least 2 points per axis"));
        }
        let finite = [self.x_min, self.x_max, self.p_min, self.p_max]
            .iter()
            .all(|v| v.is_finite());
        if !finite || self.x_max <= self.x_min || self.p_max <= self.p_min {
            return Err(invalid("grid", "bounds must be finite with min < max"));
        }
        Ok(())
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.nx - 1) as f64
    }

    pub fn dp(&self) -> f64 {
        (self.p_max - self.p_min) / (self.np - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx()
    }

    pub fn p(&self, j: usize) -> f64 {
        self.p_min + j as f64 * self.dp()
    }

    pub fn cell_area(&self) -> f64 {
        self.dx() * self.dp()
    }
}

/// First and second moments of a sampled phase-space density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub mass: f64,
    pub mean_x: f64,
    pub mean_p: f64,
    pub var_x: f64,
    pub var_p: f64,
}

/// Wigner function sampled on a [`GridSpec`], stored row-major with `x`
/// as the slow index.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerGrid {
    spec: GridSpec,
    values: Vec<f64>,
}

impl WignerGrid {
    pub fn from_values(spec: GridSpec, values: Vec<f64>) -> Result<Self> {
        spec.validate()?;
        if values.len() != spec.nx * spec.np {
            return Err(Error::DimensionMismatch {
                expected: spec.nx * spec.np,
                found: values.len(),
            });
        }
        Ok(Self { spec, values })
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.spec.np + j]
    }

    pub fn total_mass(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.spec.cell_area()
    }

    pub fn moments(&self) -> Moments {
        let s = &self.spec;
        let (mut m0, mut mx, mut mp, mut mxx, mut mpp) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for i in 0..s.nx {
            let x = s.x(i);
            for j in 0..s.np {
                let p = s.p(j);
                let w = self.value(i, j);
                m0 += w;
                mx += w * x;
                mp += w * p;
                mxx += w * x * x;
                mpp += w * p * p;
            }
        }
        let mean_x = mx / m0;
        let mean_p = mp / m0;
        Moments {
            mass: m0 * s.cell_area(),
            mean_x,
            mean_p,
            var_x: mxx / m0 - mean_x * mean_x,
            var_p: mpp / m0 - mean_p * mean_p,
        }
    }

    /// `Tr(ρ₁ρ₂) = 2π ∬ W₁ W₂ dx dp` by Riemann sum.
    pub fn overlap(&self, other: &WignerGrid) -> Result<f64> {
        self.check_geometry(other)?;
        let dot: f64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .sum();
        Ok(2.0 * PI * dot * self.spec.cell_area())
    }

    pub fn max_abs_diff(&self, other: &WignerGrid) -> Result<f64> {
        self.check_geometry(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    fn check_geometry(&self, other: &WignerGrid) -> Result<()> {
        if self.spec != other.spec {
            return Err(invalid("grid", "grids have different geometry"));
        }
        Ok(())
    }

    /// CSV with header `x,p,w`, one line per grid point, `x` slowest.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "x,p,w")?;
        for i in 0..self.spec.nx {
            let x = self.spec.x(i);
            for j in 0..self.spec.np {
                writeln!(out, "{:.14e},{:.14e},{:.14e}", x, self.spec.p(j), self.value(i, j))?;
            }
        }
        Ok(())
    }
}

/// Samples the Wigner function of a single-mode Gaussian state,
/// `W(r) = exp(−½ (r−μ)ᵀV⁻¹(r−μ)) / (2π√det V)`.
pub fn wigner_of_gaussian(state: &GaussianState, grid: &GridSpec) -> Result<WignerGrid> {
    grid.validate()?;
    if state.n_modes() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: state.n_modes(),
        });
    }
    let cov = state.cov();
    let chol = cov.clone().cholesky().ok_or(Error::DegenerateCovariance)?;
    let inv = chol.inverse();
    let norm = 1.0 / (2.0 * PI * chol.determinant().sqrt());
    let (mx, mp) = (state.mean()[0], state.mean()[1]);
    let (a, b, c) = (inv[(0, 0)], inv[(0, 1)], inv[(1, 1)]);

    let mut values = Vec::with_capacity(grid.nx * grid.np);
    for i in 0..grid.nx {
        let u = grid.x(i) - mx;
        for j in 0..grid.np {
            let v = grid.p(j) - mp;
            let q = a * u * u + 2.0 * b * u * v + c * v * v;
            values.push(norm * (-0.5 * q).exp());
        }
    }
    Ok(WignerGrid {
        spec: *grid,
        values,
    })
}

// Sampled zero-mean Gaussian of the given variance on spacing `h`, truncated
// at 8σ (or the grid length) and normalized to unit sum.
fn sampled_kernel(variance: f64, h: f64, len: usize) -> Vec<f64> {
    if variance == 0.0 {
        return vec![1.0];
    }
    let sigma = variance.sqrt();
    let half = ((8.0 * sigma / h).ceil() as usize).min(len - 1);
    let mut k: Vec<f64> = (0..=2 * half)
        .map(|m| {
            let y = (m as f64 - half as f64) * h;
            (-y * y / (2.0 * variance)).exp()
        })
        .collect();
    let total: f64 = k.iter().sum();
    k.iter_mut().for_each(|v| *v /= total);
    k
}

/// Convolves a Wigner grid with the Gaussian shift law `noise`, which is
/// what one copy of the cloner does to any input.
///
/// The kernel factorizes over the two axes, so the 2-D convolution is done
/// as zero-padded FFT convolutions along `p` and then along `x`. Rejects
/// kernels whose 4σ reach exceeds half the grid extent, since the result
/// would then lose mass off the grid edges.
pub fn convolve_wigner(w: &WignerGrid, noise: &ShiftDistribution) -> Result<WignerGrid> {
    let s = w.spec;
    for (axis, var, lo, hi) in [("x", noise.vx(), s.x_min, s.x_max), ("p", noise.vp(), s.p_min, s.p_max)] {
        let four_sigma = 4.0 * var.sqrt();
        let half_extent = (hi - lo) / 2.0;
        if four_sigma > half_extent {
            return Err(Error::KernelTooWide {
                axis,
                four_sigma,
                half_extent,
            });
        }
    }

    let mut values = w.values.clone();
    let mut scratch: Vec<Complex64> = Vec::new();

    let kp = sampled_kernel(noise.vp(), s.dp(), s.np);
    if kp.len() > 1 {
        let conv = SameConvolver::new(s.np, &kp);
        for row in values.chunks_mut(s.np) {
            conv.apply(row, &mut scratch);
        }
    }

    let kx = sampled_kernel(noise.vx(), s.dx(), s.nx);
    if kx.len() > 1 {
        let conv = SameConvolver::new(s.nx, &kx);
        let mut column = vec![0.0; s.nx];
        for j in 0..s.np {
            for i in 0..s.nx {
                column[i] = values[i * s.np + j];
            }
            conv.apply(&mut column, &mut scratch);
            for i in 0..s.nx {
                values[i * s.np + j] = column[i];
            }
        }
    }

    Ok(WignerGrid { spec: s, values })
}
