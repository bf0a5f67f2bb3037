use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{invalid, Error, Result};

/// Largest `n^k` accepted by default.
pub const DEFAULT_AMPLITUDE_CAP: usize = 1 << 20;

const NORM_TOL: f64 = 1e-12;
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Continuum grid spacing `√(2π/n)` of the `Z_n` embedding.
pub fn embedding_spacing(n: usize) -> f64 {
    (2.0 * PI / n as f64).sqrt()
}

/// Centered representative of `a mod n` in `(−n/2, n/2]`.
pub fn centered(a: usize, n: usize) -> i64 {
    let a = (a % n) as i64;
    if 2 * a > n as i64 {
        a - n as i64
    } else {
        a
    }
}

/// `ω^m` for `ω = e^{2πi/n}`, with `m` reduced first so large exponents do
/// not lose phase accuracy.
pub(crate) fn root_of_unity(n: usize, m: i64) -> Complex64 {
    let r = m.rem_euclid(n as i64);
    Complex64::from_polar(1.0, 2.0 * PI * r as f64 / n as f64)
}

pub(crate) fn roots_table(n: usize) -> Vec<Complex64> {
    (0..n as i64).map(|m| root_of_unity(n, m)).collect()
}

/// Pure state of `k` variables, each of dimension `n`. Amplitudes are
/// indexed by position tuples in row-major order, variable 0 slowest.
#[derive(Debug, Clone, PartialEq)]
pub struct ModularState {
    n: usize,
    k: usize,
    amps: Vec<Complex64>,
}

impl ModularState {
    pub fn check_size(n: usize, k: usize, cap: usize) -> Result<usize> {
        if n == 0 {
            return Err(invalid("n", "modulus must be positive"));
        }
        if k == 0 {
            return Err(invalid("k", "need at least one variable"));
        }
        let too_large = Error::TooLarge { n, k: k as u32, cap };
        let size = n.checked_pow(k as u32).ok_or(too_large)?;
        if size > cap {
            return Err(Error::TooLarge { n, k: k as u32, cap });
        }
        Ok(size)
    }

    pub fn new(n: usize, k: usize, amps: Vec<Complex64>) -> Result<Self> {
        Self::with_cap(n, k, amps, DEFAULT_AMPLITUDE_CAP)
    }

    pub fn with_cap(n: usize, k: usize, amps: Vec<Complex64>, cap: usize) -> Result<Self> {
        let size = Self::check_size(n, k, cap)?;
        if amps.len() != size {
            return Err(Error::DimensionMismatch {
                expected: size,
                found: amps.len(),
            });
        }
        let norm = norm_sq(&amps);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { n, k, amps })
    }

    /// Rescales to unit norm before validating.
    pub fn normalized(n: usize, k: usize, mut amps: Vec<Complex64>) -> Result<Self> {
        let norm = norm_sq(&amps);
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::NotNormalized(norm));
        }
        let s = 1.0 / norm.sqrt();
        amps.iter_mut().for_each(|a| *a *= s);
        Self::new(n, k, amps)
    }

    pub(crate) fn from_parts_unchecked(n: usize, k: usize, amps: Vec<Complex64>) -> Self {
        debug_assert_eq!(amps.len(), n.pow(k as u32));
        Self { n, k, amps }
    }

    /// Position eigenstate `|x₀, x₁, …⟩`.
    pub fn basis(n: usize, positions: &[usize]) -> Result<Self> {
        let k = positions.len();
        let size = Self::check_size(n, k, DEFAULT_AMPLITUDE_CAP)?;
        let mut idx = 0;
        for &x in positions {
            if x >= n {
                return Err(Error::OutOfRange { index: x, limit: n });
            }
            idx = idx * n + x;
        }
        let mut amps = vec![ZERO; size];
        amps[idx] = Complex64::new(1.0, 0.0);
        Ok(Self { n, k, amps })
    }

    /// Momentum eigenstate `n^{−1/2} Σ_x ω^{b·x}|x⟩`.
    pub fn momentum(n: usize, b: usize) -> Result<Self> {
        if b >= n {
            return Err(Error::OutOfRange { index: b, limit: n });
        }
        let s = 1.0 / (n as f64).sqrt();
        let amps = (0..n).map(|x| root_of_unity(n, (b * x) as i64) * s).collect();
        Self::new(n, 1, amps)
    }

    /// Normalized samples of `exp(−(x̃Δ)²/2)` at centered representatives:
    /// the discrete stand-in for the vacuum wavefunction.
    pub fn sampled_vacuum(n: usize) -> Result<Self> {
        let d = embedding_spacing(n);
        let amps = (0..n)
            .map(|x| {
                let y = centered(x, n) as f64 * d;
                Complex64::new((-y * y / 2.0).exp(), 0.0)
            })
            .collect();
        Self::normalized(n, 1, amps)
    }

    /// Vacuum wavefunction periodized over `Z_n`:
    /// `Σ_m exp(−((x + m·n)Δ)²/2)`. This is an exact eigenvector of the
    /// discrete Fourier transform.
    pub fn periodized_vacuum(n: usize) -> Result<Self> {
        let d = embedding_spacing(n);
        let amps = (0..n)
            .map(|x| {
                let v: f64 = (-12i64..=12)
                    .map(|m| {
                        let y = (x as f64 + (m * n as i64) as f64) * d;
                        (-y * y / 2.0).exp()
                    })
                    .sum();
                Complex64::new(v, 0.0)
            })
            .collect();
        Self::normalized(n, 1, amps)
    }

    /// Discrete coherent state: the periodized vacuum displaced by `D(a, b)`,
    /// i.e. centered at `x = ãΔ`, `p = b̃Δ`.
    pub fn coherent(n: usize, a: usize, b: usize) -> Result<Self> {
        Self::periodized_vacuum(n)?.weyl_displace(0, a, b)
    }

    /// Haar-like random state: independent complex entries, normalized.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> Result<Self> {
        let size = Self::check_size(n, k, DEFAULT_AMPLITUDE_CAP)?;
        let amps = (0..size)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        Self::normalized(n, k, amps)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sq(&self) -> f64 {
        norm_sq(&self.amps)
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &ModularState) -> Result<Complex64> {
        self.check_same_shape(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn max_abs_diff(&self, other: &ModularState) -> Result<f64> {
        self.check_same_shape(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    fn check_same_shape(&self, other: &ModularState) -> Result<()> {
        if self.n != other.n || self.k != other.k {
            return Err(Error::DimensionMismatch {
                expected: self.amps.len(),
                found: other.amps.len(),
            });
        }
        Ok(())
    }

    /// `self ⊗ other`, with `self`'s variables first.
    pub fn tensor(&self, other: &ModularState) -> Result<ModularState> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        let k = self.k + other.k;
        Self::check_size(self.n, k, DEFAULT_AMPLITUDE_CAP)?;
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for a in &self.amps {
            amps.extend(other.amps.iter().map(|b| a * b));
        }
        Ok(Self { n: self.n, k, amps })
    }

    pub(crate) fn decode(&self, mut idx: usize, digits: &mut [usize]) {
        for d in digits.iter_mut().rev() {
            *d = idx % self.n;
            idx /= self.n;
        }
    }

    pub(crate) fn encode(&self, digits: &[usize]) -> usize {
        digits.iter().fold(0, |acc, &d| acc * self.n + d)
    }

    /// Applies a basis permutation given as an in-place map on position
    /// tuples. The map must be a bijection of `Z_n^k`.
    pub fn permute_basis(&self, mut map: impl FnMut(&mut [usize])) -> ModularState {
        let mut out = vec![ZERO; self.amps.len()];
        let mut digits = vec![0; self.k];
        for (idx, &a) in self.amps.iter().enumerate() {
            self.decode(idx, &mut digits);
            map(&mut digits);
            out[self.encode(&digits)] = a;
        }
        ModularState {
            n: self.n,
            k: self.k,
            amps: out,
        }
    }

    /// Reorders variables: variable `order[i]` of `self` becomes variable
    /// `i` of the result.
    pub fn reorder_variables(&self, order: &[usize]) -> Result<ModularState> {
        let mut seen = vec![false; self.k];
        if order.len() != self.k {
            return Err(Error::DimensionMismatch {
                expected: self.k,
                found: order.len(),
            });
        }
        for &v in order {
            if v >= self.k || seen[v] {
                return Err(invalid("order", "must be a permutation of the variables"));
            }
            seen[v] = true;
        }
        let mut src = vec![0; self.k];
        Ok(self.permute_basis(|d| {
            src.clone_from_slice(d);
            for (i, &v) in order.iter().enumerate() {
                d[i] = src[v];
            }
        }))
    }

    /// Weyl displacement `|x⟩ → ω^{b·x}|x + a⟩` on one variable: a phase
    /// (momentum) shift followed by a position shift.
    pub fn weyl_displace(&self, variable: usize, a: usize, b: usize) -> Result<ModularState> {
        if variable >= self.k {
            return Err(Error::OutOfRange {
                index: variable,
                limit: self.k,
            });
        }
        let n = self.n;
        let roots = roots_table(n);
        let stride = n.pow((self.k - 1 - variable) as u32);
        let (a, b) = (a % n, b % n);
        let mut out = vec![ZERO; self.amps.len()];
        for (idx, &amp) in self.amps.iter().enumerate() {
            let x = (idx / stride) % n;
            let y = (x + a) % n;
            let target = idx - x * stride + y * stride;
            out[target] = amp * roots[(b * x) % n];
        }
        Ok(ModularState {
            n,
            k: self.k,
            amps: out,
        })
    }
}

fn norm_sq(amps: &[Complex64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn centered_representatives() {
        let reps: Vec<i64> = (0..8).map(|a| centered(a, 8)).collect();
        assert_eq!(reps, vec![0, 1, 2, 3, 4, -3, -2, -1]);
        let reps: Vec<i64> = (0..5).map(|a| centered(a, 5)).collect();
        assert_eq!(reps, vec![0, 1, 2, -2, -1]);
    }

    #[test]
    fn size_cap() {
        assert!(ModularState::check_size(32, 4, DEFAULT_AMPLITUDE_CAP).is_ok());
        assert!(matches!(
            ModularState::check_size(33, 4, DEFAULT_AMPLITUDE_CAP),
            Err(Error::TooLarge { .. })
        ));
        assert!(ModularState::check_size(usize::MAX, 3, DEFAULT_AMPLITUDE_CAP).is_err());
        assert!(ModularState::with_cap(4, 2, vec![ZERO; 16], 8).is_err());
    }

    #[test]
    fn weyl_identity_and_group_law() {
        let mut rng = rand::rng();
        let s = ModularState::random(&mut rng, 5, 2).unwrap();
        assert_eq!(s.weyl_displace(1, 0, 0).unwrap(), s);
        let twice = s.weyl_displace(0, 3, 0).unwrap().weyl_displace(0, 4, 0).unwrap();
        let once = s.weyl_displace(0, 2, 0).unwrap();
        assert!(twice.max_abs_diff(&once).unwrap() < 1e-15);
        assert!(s.weyl_displace(2, 0, 0).is_err());
    }

    #[test]
    fn weyl_on_basis_state() {
        let s = ModularState::basis(4, &[3]).unwrap().weyl_displace(0, 2, 1).unwrap();
        // ω^{1·3} |1⟩ with ω = i
        let expect = Complex64::new(0.0, -1.0);
        assert!((s.amps()[1] - expect).norm() < 1e-15);
    }

    #[test]
    fn periodized_vacuum_is_dft_eigenvector() {
        for n in [4, 7, 16] {
            let v = ModularState::periodized_vacuum(n).unwrap();
            let roots = roots_table(n);
            for k in 0..n {
                let y: Complex64 = (0..n).map(|x| roots[(n - (k * x) % n) % n] * v.amps()[x]).sum::<Complex64>()
                    / (n as f64).sqrt();
                assert!((y - v.amps()[k]).norm() < 1e-12, "n={n}");
            }
        }
    }

    #[test]
    fn reorder_and_tensor() {
        let a = ModularState::basis(3, &[1]).unwrap();
        let b = ModularState::basis(3, &[2]).unwrap();
        let ab = a.tensor(&b).unwrap();
        assert_eq!(ab, ModularState::basis(3, &[1, 2]).unwrap());
        assert_eq!(ab.reorder_variables(&[1, 0]).unwrap(), ModularState::basis(3, &[2, 1]).unwrap());
        assert!(ab.reorder_variables(&[0, 0]).is_err());
        let abc = ab.tensor(&ModularState::basis(3, &[0]).unwrap()).unwrap();
        assert_eq!(
            abc.reorder_variables(&[2, 0, 1]).unwrap(),
            ModularState::basis(3, &[0, 1, 2]).unwrap()
        );
    }

    #[test]
    fn momentum_states_are_orthonormal() {
        for b in 0..6 {
            for c in 0..6 {
                let ip = ModularState::momentum(6, b).unwrap().inner(&ModularState::momentum(6, c).unwrap()).unwrap();
                let expect = if b == c { 1.0 } else { 0.0 };
                assert!((ip - Complex64::new(expect, 0.0)).norm() < 1e-12);
            }
        }
    }
}
