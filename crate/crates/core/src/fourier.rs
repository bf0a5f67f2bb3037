//! FFT helpers shared by the engines.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// Sign of the exponent in a Fourier kernel `e^{±2πi…}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    fn as_f64(self) -> f64 {
        match self {
            Sign::Minus => -1.0,
            Sign::Plus => 1.0,
        }
    }
}

/// Unitary DFT with indices centered on `c = ⌊n/2⌋`:
///
/// `y[k] = n^{-1/2} Σ_j e^{±2πi (k−c)(j−c)/n} x[j]`.
///
/// This is the transform that maps samples of a function on the grid
/// `(j − c)·δ` with `δ = √(2π/n)` to samples of its continuum Fourier
/// transform on the same grid.
pub struct CenteredDft {
    n: usize,
    sign: Sign,
    fft: Arc<dyn Fft<f64>>,
    // e^{∓2πi c j / n}
    twiddle: Vec<Complex64>,
    // e^{±2πi c² / n} / √n
    global: Complex64,
}

impl CenteredDft {
    pub fn new(n: usize, sign: Sign) -> Self {
        let mut planner = FftPlanner::new();
        let fft = match sign {
            Sign::Minus => planner.plan_fft_forward(n),
            Sign::Plus => planner.plan_fft_inverse(n),
        };
        let s = sign.as_f64();
        let c = (n / 2) as f64;
        let nf = n as f64;
        let twiddle = (0..n)
            .map(|j| Complex64::from_polar(1.0, -s * 2.0 * PI * c * (j as f64) / nf))
            .collect();
        // c² reduced mod n keeps the phase argument small
        let c2 = ((n / 2) * (n / 2)) % n.max(1);
        let global = Complex64::from_polar(1.0 / nf.sqrt(), s * 2.0 * PI * c2 as f64 / nf);
        Self {
            n,
            sign,
            fft,
            twiddle,
            global,
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn process(&self, data: &mut [Complex64]) {
        assert_eq!(data.len(), self.n, "centered DFT length mismatch");
        for (x, t) in data.iter_mut().zip(&self.twiddle) {
            *x *= t;
        }
        self.fft.process(data);
        for (y, t) in data.iter_mut().zip(&self.twiddle) {
            *y *= t * self.global;
        }
    }
}

/// Linear ("same"-size) convolution of real sequences through a zero-padded
/// FFT. The kernel is centered: `kernel[half]` is the zero offset, so its
/// length must be odd.
pub struct SameConvolver {
    len: usize,
    half: usize,
    padded: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    kernel_spectrum: Vec<Complex64>,
}

impl SameConvolver {
    pub fn new(len: usize, kernel: &[f64]) -> Self {
        assert!(kernel.len() % 2 == 1, "kernel length must be odd");
        let half = kernel.len() / 2;
        // full linear convolution length; no circular wrap can reach the
        // retained window
        let padded = len + 2 * half;
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(padded);
        let inverse = planner.plan_fft_inverse(padded);

        let mut kernel_spectrum = vec![Complex64::new(0.0, 0.0); padded];
        for (i, &k) in kernel.iter().enumerate() {
            kernel_spectrum[i] = Complex64::new(k, 0.0);
        }
        forward.process(&mut kernel_spectrum);
        Self {
            len,
            half,
            padded,
            forward,
            inverse,
            kernel_spectrum,
        }
    }

    /// Convolves `signal` in place.
    pub fn apply(&self, signal: &mut [f64], scratch: &mut Vec<Complex64>) {
        assert_eq!(signal.len(), self.len);
        scratch.clear();
        scratch.extend(signal.iter().map(|&v| Complex64::new(v, 0.0)));
        scratch.resize(self.padded, Complex64::new(0.0, 0.0));
        self.forward.process(scratch);
        for (s, k) in scratch.iter_mut().zip(&self.kernel_spectrum) {
            *s *= k;
        }
        self.inverse.process(scratch);
        let scale = 1.0 / self.padded as f64;
        for (i, out) in signal.iter_mut().enumerate() {
            *out = scratch[i + self.half].re * scale;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_centered(x: &[Complex64], sign: f64) -> Vec<Complex64> {
        let n = x.len();
        let c = (n / 2) as f64;
        (0..n)
            .map(|k| {
                x.iter()
                    .enumerate()
                    .map(|(j, &v)| {
                        let ph = sign * 2.0 * PI * (k as f64 - c) * (j as f64 - c) / n as f64;
                        v * Complex64::from_polar(1.0, ph)
                    })
                    .sum::<Complex64>()
                    / (n as f64).sqrt()
            })
            .collect()
    }

    #[test]
    fn centered_dft_matches_direct_sum() {
        for n in [1usize, 2, 5, 8, 13, 16] {
            let x: Vec<Complex64> = (0..n)
                .map(|j| Complex64::new((j as f64 * 0.7).sin(), (j as f64 * 1.3).cos()))
                .collect();
            for (sign, s) in [(Sign::Minus, -1.0), (Sign::Plus, 1.0)] {
                let mut y = x.clone();
                CenteredDft::new(n, sign).process(&mut y);
                let expect = naive_centered(&x, s);
                for (a, b) in y.iter().zip(&expect) {
                    assert!((a - b).norm() < 1e-12, "n={n}");
                }
            }
        }
    }

    #[test]
    fn same_convolution_matches_direct_sum() {
        let signal: Vec<f64> = (0..11).map(|i| (i as f64 * 0.4).cos() + 1.0).collect();
        let kernel = [0.05, 0.25, 0.4, 0.2, 0.1];
        let mut out = signal.clone();
        let mut scratch = Vec::new();
        SameConvolver::new(signal.len(), &kernel).apply(&mut out, &mut scratch);
        for (i, got) in out.iter().enumerate() {
            let mut acc = 0.0;
            for (m, &k) in kernel.iter().enumerate() {
                let j = i as isize + 2 - m as isize;
                if (0..signal.len() as isize).contains(&j) {
                    acc += k * signal[j as usize];
                }
            }
            assert!((got - acc).abs() < 1e-12);
        }
    }
}
