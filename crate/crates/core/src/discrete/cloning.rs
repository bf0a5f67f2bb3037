use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::cloner::Output;
use crate::error::{Error, Result};

use super::amplitude::{bell_state, chi_state, DiscreteAmplitude};
use super::density::DensityOperator;
use super::state::{centered, embedding_spacing, ModularState};

fn cloner_map(n: usize, d: &mut [usize]) {
    let (x2, x3, x4) = (d[0], d[1], d[2]);
    d[0] = (x2 + x4 + n - x3) % n;
    d[1] = (x2 + x3) % n;
    d[2] = (x2 + x4) % n;
}

/// Cloning unitary on (input, blank, ancilla):
/// `|x₂, x₃, x₄⟩ → |x₂ + x₄ − x₃, x₂ + x₃, x₂ + x₄⟩`.
///
/// This is `e^{−i(x̂₄−x̂₃)p̂₂} e^{−ix̂₂(p̂₃+p̂₄)}` evaluated factor by factor:
/// the right factor adds `x₂` to both auxiliary variables, then the left
/// factor adds their difference to the input. For the universal ancilla
/// `|y⟩|y+z⟩` an input `|x⟩` goes to `|x+z⟩|x+y⟩|x+y+z⟩`, which is the
/// textbook three-mode pattern with the integration labels `y`, `z`
/// exchanged. The exchange only matters for asymmetric amplitudes.
pub fn cloner_apply(state: &ModularState) -> Result<ModularState> {
    if state.k() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: state.k(),
        });
    }
    let n = state.n();
    Ok(state.permute_basis(|d| cloner_map(n, d)))
}

/// Runs the cloner on a pure input and returns the reduced states of the
/// two copies.
pub fn clone(input: &ModularState, famp: &DiscreteAmplitude) -> Result<(DensityOperator, DensityOperator)> {
    if input.k() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: input.k(),
        });
    }
    if input.n() != famp.n() {
        return Err(Error::DimensionMismatch {
            expected: famp.n(),
            found: input.n(),
        });
    }
    let out = cloner_apply(&input.tensor(&chi_state(famp)?)?)?;
    Ok((DensityOperator::reduced(&out, 0)?, DensityOperator::reduced(&out, 1)?))
}

/// Joint distribution `P(a, b)` of the shift and phase errors on one copy.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorDistribution {
    n: usize,
    probs: Vec<f64>,
}

impl ErrorDistribution {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Row-major table, shift `a` slowest.
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.probs[a * self.n + b]
    }

    pub fn max_abs_diff(&self, other: &[f64]) -> f64 {
        assert_eq!(other.len(), self.probs.len());
        self.probs
            .iter()
            .zip(other)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Position and momentum variances in continuum units, using centered
    /// representatives scaled by `Δ = √(2π/n)`.
    pub fn marginal_variances(&self) -> (f64, f64) {
        let n = self.n;
        let d = embedding_spacing(n);
        let (mut mx, mut mp, mut mxx, mut mpp) = (0.0, 0.0, 0.0, 0.0);
        for a in 0..n {
            let x = centered(a, n) as f64 * d;
            for b in 0..n {
                let p = centered(b, n) as f64 * d;
                let w = self.get(a, b);
                mx += w * x;
                mp += w * p;
                mxx += w * x * x;
                mpp += w * p * p;
            }
        }
        (mxx - mx * mx, mpp - mp * mp)
    }
}

/// Full four-variable simulation: a reference maximally entangled with the
/// input, `|ψ(0,0)⟩₁₂ ⊗ |χ⟩₃₄`, after the cloner acts on variables 2–4.
/// Variables are stored as (reference, copy a, copy b, ancilla).
#[derive(Debug, Clone)]
pub struct CloneSimulation {
    joint: ModularState,
}

impl CloneSimulation {
    pub fn new(famp: &DiscreteAmplitude) -> Result<Self> {
        let n = famp.n();
        ModularState::check_size(n, 4, super::DEFAULT_AMPLITUDE_CAP)?;
        let start = bell_state(n, 0, 0)?.tensor(&chi_state(famp)?)?;
        let joint = start.permute_basis(|d| cloner_map(n, &mut d[1..4]));
        Ok(Self { joint })
    }

    pub fn joint(&self) -> &ModularState {
        &self.joint
    }

    /// Same state with the two copies relabeled.
    pub fn swap_outputs(&self) -> Self {
        let joint = self
            .joint
            .reorder_variables(&[0, 2, 1, 3])
            .expect("fixed permutation of four variables");
        Self { joint }
    }

    /// Bell-basis measurement of (reference, copy): `P(a, b)` is the
    /// probability of finding the pair in `|ψ(a, b)⟩`, i.e. of the copy
    /// having suffered `D(a, b)`.
    pub fn error_distribution(&self, copy: Output) -> ErrorDistribution {
        let var = match copy {
            Output::A => 1,
            Output::B => 2,
        };
        let order: Vec<usize> = [0, var].into_iter().chain((1..4).filter(|&v| v != var)).collect();
        let phi = self
            .joint
            .reorder_variables(&order)
            .expect("valid permutation of four variables");
        bell_measurement(&phi)
    }
}

// P(a, b) = Σ_rest |Σ_x n^{−1/2} ω^{−b·x} Φ[x, x+a, rest]|² over the first two
// variables of `phi`; the inner sum over x is a forward DFT for all b at once.
fn bell_measurement(phi: &ModularState) -> ErrorDistribution {
    let n = phi.n();
    let rest = phi.amps().len() / (n * n);
    let fft = FftPlanner::new().plan_fft_forward(n);
    let amps = phi.amps();
    let mut probs = vec![0.0; n * n];
    let mut v = vec![Complex64::new(0.0, 0.0); n];
    for a in 0..n {
        for r in 0..rest {
            for (x, slot) in v.iter_mut().enumerate() {
                *slot = amps[(x * n + (x + a) % n) * rest + r];
            }
            fft.process(&mut v);
            for (b, z) in v.iter().enumerate() {
                probs[a * n + b] += z.norm_sqr() / n as f64;
            }
        }
    }
    ErrorDistribution { n, probs }
}

/// Error law of one copy, read off the full oracle simulation. Independent
/// of the input state, since the reference purifies a maximally mixed input.
pub fn error_distribution(famp: &DiscreteAmplitude, copy: Output) -> Result<ErrorDistribution> {
    Ok(CloneSimulation::new(famp)?.error_distribution(copy))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use crate::discrete::gaussian_amplitude;

    #[test]
    fn position_copies_itself() {
        let n = 6;
        for x in 0..n {
            let out = cloner_apply(&ModularState::basis(n, &[x, 0, 0]).unwrap()).unwrap();
            assert_eq!(out, ModularState::basis(n, &[x, x, x]).unwrap());
        }
    }

    // Each factor of the unitary is a controlled modular addition
    // |c, t⟩ → |c, t + c⟩; compose them right to left on basis tuples.
    fn add_into(n: usize, d: &mut [usize; 3], control: &[(usize, i64)], target: usize) {
        let shift: i64 = control.iter().map(|&(v, s)| s * d[v] as i64).sum();
        d[target] = ((d[target] as i64 + shift).rem_euclid(n as i64)) as usize;
    }

    fn composed(n: usize, mut d: [usize; 3]) -> [usize; 3] {
        // e^{−i x̂₂ p̂₃}, e^{−i x̂₂ p̂₄}
        add_into(n, &mut d, &[(0, 1)], 1);
        add_into(n, &mut d, &[(0, 1)], 2);
        // e^{−i (x̂₄ − x̂₃) p̂₂}
        add_into(n, &mut d, &[(2, 1), (1, -1)], 0);
        d
    }

    #[test]
    fn permutation_matches_factor_composition() {
        let n = 5;
        for x2 in 0..n {
            for x3 in 0..n {
                for x4 in 0..n {
                    let out = cloner_apply(&ModularState::basis(n, &[x2, x3, x4]).unwrap()).unwrap();
                    let e = composed(n, [x2, x3, x4]);
                    assert_eq!(out, ModularState::basis(n, &e).unwrap());
                }
            }
        }
        // |0, y, z⟩ → |z − y, y, z⟩
        let out = cloner_apply(&ModularState::basis(n, &[0, 1, 3]).unwrap()).unwrap();
        assert_eq!(out, ModularState::basis(n, &[2, 1, 3]).unwrap());
    }

    #[test]
    fn cloner_requires_three_variables() {
        assert!(cloner_apply(&ModularState::basis(3, &[0, 0]).unwrap()).is_err());
    }

    #[test]
    fn cloner_preserves_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let s = ModularState::random(&mut rng, 7, 3).unwrap();
        let out = cloner_apply(&s).unwrap();
        assert!((out.norm_sq() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn position_input_gets_position_errors() {
        let n = 8;
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let f = DiscreteAmplitude::random(&mut rng, n);
        let x0 = 3;
        let (rho_a, _) = clone(&ModularState::basis(n, &[x0]).unwrap(), &f).unwrap();
        for r in 0..n {
            for c in 0..n {
                let expect = if r == c {
                    let a = (r + n - x0) % n;
                    (0..n).map(|b| f.get(a, b).norm_sqr()).sum()
                } else {
                    0.0
                };
                assert!((rho_a.matrix()[(r, c)] - Complex64::new(expect, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn momentum_input_gets_momentum_errors() {
        let n = 8;
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let f = DiscreteAmplitude::random(&mut rng, n);
        let b0 = 5;
        let (rho_a, _) = clone(&ModularState::momentum(n, b0).unwrap(), &f).unwrap();
        for q in 0..n {
            let m = ModularState::momentum(n, q).unwrap();
            let b = (q + n - b0) % n;
            let expect: f64 = (0..n).map(|a| f.get(a, b).norm_sqr()).sum();
            assert!((rho_a.fidelity(&m).unwrap() - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn delta_amplitude_gives_perfect_first_copy() {
        let n = 6;
        let f = DiscreteAmplitude::delta(n, 0, 0).unwrap();
        let p = error_distribution(&f, Output::A).unwrap();
        assert!((p.get(0, 0) - 1.0).abs() < 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let psi = ModularState::random(&mut rng, n, 1).unwrap();
        let (rho_a, _) = clone(&psi, &f).unwrap();
        assert!((rho_a.fidelity(&psi).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn universal_copies_share_one_distribution() {
        let sim = CloneSimulation::new(&gaussian_amplitude(8).unwrap()).unwrap();
        let a = sim.error_distribution(Output::A);
        let b = sim.error_distribution(Output::B);
        assert!(a.max_abs_diff(b.probs()) < 1e-3);
    }

    #[test]
    fn swapping_outputs_swaps_distributions() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let f = DiscreteAmplitude::random(&mut rng, 5);
        let sim = CloneSimulation::new(&f).unwrap();
        let swapped = sim.swap_outputs();
        let (a, b) = (sim.error_distribution(Output::A), sim.error_distribution(Output::B));
        assert_eq!(swapped.error_distribution(Output::A).probs(), b.probs());
        assert_eq!(swapped.error_distribution(Output::B).probs(), a.probs());
        assert!(a.max_abs_diff(&f.probabilities()) < 1e-12);
        assert!(b.max_abs_diff(&f.dual().probabilities()) < 1e-12);
    }

    #[test]
    fn oversized_simulation_is_rejected() {
        let f = DiscreteAmplitude::delta(40, 0, 0).unwrap();
        assert!(matches!(CloneSimulation::new(&f), Err(Error::TooLarge { .. })));
    }
}
