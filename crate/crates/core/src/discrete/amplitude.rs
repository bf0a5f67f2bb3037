use std::io::{BufRead, Write};

use num_complex::Complex64;
use rand::Rng;
use rustfft::FftPlanner;

use crate::cloner::read_amplitude_csv;
use crate::error::{invalid, Error, Result};

use super::state::{centered, embedding_spacing, roots_table, ModularState};

const NORM_TOL: f64 = 1e-12;

/// Generalized Bell state
/// `|ψ(a, b)⟩ = n^{−1/2} Σ_x ω^{b·x} |x⟩|x + a⟩`.
pub fn bell_state(n: usize, a: usize, b: usize) -> Result<ModularState> {
    if n == 0 {
        return Err(invalid("n", "modulus must be positive"));
    }
    for v in [a, b] {
        if v >= n {
            return Err(Error::OutOfRange { index: v, limit: n });
        }
    }
    ModularState::check_size(n, 2, super::DEFAULT_AMPLITUDE_CAP)?;
    let roots = roots_table(n);
    let s = 1.0 / (n as f64).sqrt();
    let mut amps = vec![Complex64::new(0.0, 0.0); n * n];
    for x in 0..n {
        amps[x * n + (x + a) % n] = roots[(b * x) % n] * s;
    }
    Ok(ModularState::from_parts_unchecked(n, 2, amps))
}

/// Cloning amplitude over `Z_n × Z_n`, indexed by (shift `a`, phase `b`)
/// with `a` the slow index.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteAmplitude {
    n: usize,
    f: Vec<Complex64>,
}

impl DiscreteAmplitude {
    pub fn new(n: usize, f: Vec<Complex64>) -> Result<Self> {
        if n == 0 {
            return Err(invalid("n", "modulus must be positive"));
        }
        if f.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: f.len(),
            });
        }
        let norm: f64 = f.iter().map(|v| v.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { n, f })
    }

    pub fn normalized(n: usize, mut f: Vec<Complex64>) -> Result<Self> {
        let norm: f64 = f.iter().map(|v| v.norm_sqr()).sum();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::NotNormalized(norm));
        }
        let s = 1.0 / norm.sqrt();
        f.iter_mut().for_each(|v| *v *= s);
        Self::new(n, f)
    }

    /// All weight on a single `(a, b)`.
    pub fn delta(n: usize, a: usize, b: usize) -> Result<Self> {
        if a >= n || b >= n {
            return Err(Error::OutOfRange {
                index: a.max(b),
                limit: n,
            });
        }
        let mut f = vec![Complex64::new(0.0, 0.0); n * n];
        f[a * n + b] = Complex64::new(1.0, 0.0);
        Self::new(n, f)
    }

    /// Independent uniformly drawn complex entries, normalized.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Self {
        let f = (0..n * n)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        Self::normalized(n, f).expect("random amplitude has nonzero norm")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[Complex64] {
        &self.f
    }

    pub fn get(&self, a: usize, b: usize) -> Complex64 {
        self.f[a * self.n + b]
    }

    /// `|f(a, b)|²` as an `n × n` table.
    pub fn probabilities(&self) -> Vec<f64> {
        self.f.iter().map(|v| v.norm_sqr()).collect()
    }

    /// Symplectic discrete Fourier transform governing the second copy:
    /// `g(a', b') = n^{−1} Σ_{a,b} ω^{b'·a − a'·b} f(a, b)`.
    pub fn dual(&self) -> DiscreteAmplitude {
        let n = self.n;
        let mut planner = FftPlanner::new();
        let plus = planner.plan_fft_inverse(n);
        let minus = planner.plan_fft_forward(n);

        // columns (fixed b, over a) with ω^{+b'a}: tmp[b'][b]
        let mut tmp = self.f.clone();
        let mut col = vec![Complex64::new(0.0, 0.0); n];
        for b in 0..n {
            for a in 0..n {
                col[a] = tmp[a * n + b];
            }
            plus.process(&mut col);
            for bp in 0..n {
                tmp[bp * n + b] = col[bp];
            }
        }
        // rows (fixed b', over b) with ω^{−a'b}: tmp[b'][a']
        for row in tmp.chunks_mut(n) {
            minus.process(row);
        }
        let scale = 1.0 / n as f64;
        let mut g = vec![Complex64::new(0.0, 0.0); n * n];
        for bp in 0..n {
            for ap in 0..n {
                g[ap * n + bp] = tmp[bp * n + ap] * scale;
            }
        }
        DiscreteAmplitude { n, f: g }
    }

    pub fn max_abs_diff(&self, other: &DiscreteAmplitude) -> f64 {
        self.f
            .iter()
            .zip(&other.f)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Same CSV layout as sampled cloner amplitudes, with integer grid
    /// coordinates `a, b ∈ {0, …, n−1}` and `delta=1`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let n = self.n;
        let rows = (0..n).flat_map(move |a| (0..n).map(move |b| (a.to_string(), b.to_string(), self.get(a, b))));
        crate::cloner::write_amplitude_csv(out, n, 1.0, rows)
    }

    pub fn read_csv<R: BufRead>(input: R) -> Result<Self> {
        let csv = read_amplitude_csv(input)?;
        let n = csv.n;
        if csv.rows.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: csv.rows.len(),
            });
        }
        let to_index = |v: f64, line: usize| -> Result<usize> {
            if v.fract() != 0.0 || v < 0.0 || v >= n as f64 {
                return Err(Error::Parse {
                    line,
                    reason: format!("`{v}` is not an integer grid coordinate below {n}"),
                });
            }
            Ok(v as usize)
        };
        let mut f = vec![Complex64::new(0.0, 0.0); n * n];
        for (r, &(a, b, v)) in csv.rows.iter().enumerate() {
            f[to_index(a, r + 3)? * n + to_index(b, r + 3)?] = v;
        }
        Self::new(n, f)
    }
}

/// Ancilla pair state `|χ⟩ = Σ_{a,b} f(a, b) |ψ(a, −b)⟩`.
pub fn chi_state(famp: &DiscreteAmplitude) -> Result<ModularState> {
    let n = famp.n;
    let roots = roots_table(n);
    let s = 1.0 / (n as f64).sqrt();
    let mut amps = vec![Complex64::new(0.0, 0.0); n * n];
    for a in 0..n {
        for b in 0..n {
            let w = famp.get(a, b);
            if w == Complex64::new(0.0, 0.0) {
                continue;
            }
            // ψ(a, −b) = n^{−1/2} Σ_x ω^{−b·x} |x⟩|x + a⟩
            for x in 0..n {
                amps[x * n + (x + a) % n] += w * roots[(n - (b * x) % n) % n] * s;
            }
        }
    }
    ModularState::new(n, 2, amps)
}

/// Discrete universal amplitude: `exp(−((ãΔ)² + (b̃Δ)²)/2)` at centered
/// representatives, `Δ = √(2π/n)`, normalized. Self-dual up to
/// periodization corrections of order `e^{−πn/4}`.
pub fn gaussian_amplitude(n: usize) -> Result<DiscreteAmplitude> {
    if n < 4 {
        return Err(invalid("n", format!("need n >= 4, got {n}")));
    }
    let d = embedding_spacing(n);
    let q: Vec<f64> = (0..n)
        .map(|a| {
            let y = centered(a, n) as f64 * d;
            (-y * y / 2.0).exp()
        })
        .collect();
    let mut f = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            f.push(Complex64::new(q[a] * q[b], 0.0));
        }
    }
    DiscreteAmplitude::normalized(n, f)
}
