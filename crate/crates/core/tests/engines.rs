//! Cross-checks between the three engines.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cvclone_core::cloner::{marginals, squeezed_cloner, AnalyticGaussian, ClonerSpec, Output, SampledAmplitude};
use cvclone_core::discrete::{self, gaussian_amplitude, CloneSimulation, ModularState};
use cvclone_core::gaussian::{
    convolve_wigner, fidelity_coherent_vs_noisy, fidelity_squeezed_vs_noisy, gaussian_overlap, wigner_of_gaussian,
    GaussianState, GridSpec, ShiftDistribution,
};

fn grid_fidelity(alpha: (f64, f64), noise: &ShiftDistribution) -> f64 {
    let input = wigner_of_gaussian(&GaussianState::coherent(alpha.0, alpha.1), &GridSpec::default()).unwrap();
    convolve_wigner(&input, noise).unwrap().overlap(&input).unwrap()
}

#[test]
fn grid_convolution_agrees_with_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let alpha = (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let noise = ShiftDistribution::new(rng.random_range(0.0..2.0), rng.random_range(0.0..2.0)).unwrap();
        let closed = fidelity_coherent_vs_noisy(alpha, &noise);
        let numeric = grid_fidelity(alpha, &noise);
        assert!((numeric - closed).abs() < 1e-4, "{alpha:?} {noise:?}: {numeric} vs {closed}");
    }
}

#[test]
fn grid_fidelity_does_not_depend_on_alpha() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let noise = ShiftDistribution::universal();
    let reference = grid_fidelity((0.0, 0.0), &noise);
    for _ in 0..20 {
        let alpha = (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        assert!((grid_fidelity(alpha, &noise) - reference).abs() < 1e-4);
    }
}

#[test]
fn closed_forms_match_the_general_overlap() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..50 {
        let noise = ShiftDistribution::new(rng.random_range(0.0..3.0), rng.random_range(0.0..3.0)).unwrap();
        let coh = GaussianState::coherent(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
        let noisy = coh.apply_cloner_noise(&noise).unwrap();
        let closed = fidelity_coherent_vs_noisy((0.0, 0.0), &noise);
        assert!((gaussian_overlap(&coh, &noisy).unwrap() - closed).abs() < 1e-13);

        let sigma = rng.random_range(0.2..5.0);
        let sq = GaussianState::squeezed(sigma, rng.random_range(-1.0..1.0), 0.3).unwrap();
        let noisy = sq.apply_cloner_noise(&noise).unwrap();
        let closed = fidelity_squeezed_vs_noisy(sigma, &noise).unwrap();
        assert!((gaussian_overlap(&sq, &noisy).unwrap() - closed).abs() < 1e-13);
    }
}

#[test]
fn sampled_squeezed_cloner_matches_analytic_marginals() {
    for sigma in [0.5, 2.0] {
        let ClonerSpec::Analytic(analytic) = squeezed_cloner(sigma).unwrap() else {
            unreachable!()
        };
        let sampled = ClonerSpec::Sampled(SampledAmplitude::from_analytic(&analytic, 128).unwrap());
        for copy in [Output::A, Output::B] {
            let want = marginals(&ClonerSpec::Analytic(analytic), copy).unwrap();
            let got = marginals(&sampled, copy).unwrap();
            assert!((got.vx() - want.vx()).abs() < 1e-6, "σ={sigma} {copy:?}");
            assert!((got.vp() - want.vp()).abs() < 1e-6, "σ={sigma} {copy:?}");
        }
    }
}

#[test]
fn symmetric_cloner_gives_identical_copies() {
    let psi = ModularState::periodized_vacuum(32).unwrap();
    let (a, b) = discrete::clone(&psi, &gaussian_amplitude(32).unwrap()).unwrap();
    assert!(a.max_abs_diff(&b).unwrap() < 1e-10);
}

#[test]
fn discrete_variances_follow_the_analytic_family() {
    // The universal discrete amplitude reproduces the continuum variances of
    // an analytic spec with va = 1/2 on both copies.
    let want = AnalyticGaussian::new(0.5, 0.5).unwrap();
    let sim = CloneSimulation::new(&gaussian_amplitude(24).unwrap()).unwrap();
    let (vx, vp) = sim.error_distribution(Output::A).marginal_variances();
    assert!((vx - want.va_x()).abs() < 1e-6 && (vp - want.va_p()).abs() < 1e-6);
    let (vx, vp) = sim.error_distribution(Output::B).marginal_variances();
    assert!((vx - want.vb_x()).abs() < 1e-6 && (vp - want.vb_p()).abs() < 1e-6);
}
