use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use cvclone_core::cloner::Output;
use cvclone_core::discrete::{self, gaussian_amplitude, CloneSimulation, DiscreteAmplitude, ModularState};

use crate::config::Params;
use crate::error::{config, Result};
use crate::report::{verdict, Report, ResultTable};

const COPY_A: f64 = 1.0;
const COPY_B: f64 = 2.0;
const LADDER: f64 = 3.0;
const MONOTONE: f64 = 4.0;
const PERFECT_COPY: f64 = 5.0;

/// Brute-force `Z_N` simulation against the predicted error laws, the
/// fidelity ladder of the universal amplitude and the perfect first copy
/// of a delta amplitude.
pub(crate) fn discrete_verify(p: &mut Params, rng: &mut ChaCha8Rng) -> Result<Report> {
    let n = p.count("n", 8)?;
    let count = p.count("count", 20)?;
    let ladder_text = p.text("ladder", "16,32,64")?;
    let dev_tol = p.float("deviation_tolerance", 1e-10)?;
    let fid_tol = p.float("fidelity_tolerance", 0.05)?;
    let floor = p.float("monotone_floor", 1e-13)?;
    let position = p.count("delta_position", 3)?;
    p.finish()?;

    let ladder = ladder_text
        .split(',')
        .map(|s| s.trim().parse::<usize>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|_| config(format!("ladder must be comma-separated sizes, got `{ladder_text}`")))?;
    // the Bell-measured simulation carries four variables, clone() three
    ModularState::check_size(n, 4, discrete::DEFAULT_AMPLITUDE_CAP)?;
    for &m in &ladder {
        ModularState::check_size(m, 3, discrete::DEFAULT_AMPLITUDE_CAP)?;
    }

    let mut table = ResultTable::new(&["check", "n", "sample", "value", "expected", "deviation", "tolerance", "pass"]);
    table.set_meta(
        "check",
        "1=copy a vs |f|^2 2=copy b vs |dual f|^2 3=fidelity vs 2/3 4=ladder monotone 5=delta f perfect copy",
    );

    let amps: Vec<DiscreteAmplitude> = (0..count).map(|_| DiscreteAmplitude::random(rng, n)).collect();
    let rows = amps
        .par_iter()
        .enumerate()
        .map(|(i, f)| -> Result<[Vec<f64>; 2]> {
            let sim = CloneSimulation::new(f)?;
            let a = sim.error_distribution(Output::A).max_abs_diff(&f.probabilities());
            let b = sim.error_distribution(Output::B).max_abs_diff(&f.dual().probabilities());
            let row = |check, dev: f64| vec![check, n as f64, i as f64, dev, 0.0, dev, dev_tol, verdict(dev <= dev_tol)];
            Ok([row(COPY_A, a), row(COPY_B, b)])
        })
        .collect::<Result<Vec<_>>>()?;
    for pair in rows {
        for row in pair {
            table.push(row)?;
        }
    }

    // sequential: the joint state at n = 64 is already 16M amplitudes
    let mut errors = Vec::new();
    for &m in &ladder {
        let psi = ModularState::periodized_vacuum(m)?;
        let (rho_a, _) = discrete::clone(&psi, &gaussian_amplitude(m)?)?;
        let f = discrete::fidelity(&rho_a, &psi)?;
        let dev = (f - 2.0 / 3.0).abs();
        errors.push(dev);
        table.push(vec![LADDER, m as f64, 0.0, f, 2.0 / 3.0, dev, fid_tol, verdict(dev <= fid_tol)])?;
    }
    if let Some(&last) = ladder.last() {
        // |F − 2/3| may only grow by roundoff from one size to the next
        let rise = errors.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
        table.push(vec![MONOTONE, last as f64, 0.0, rise, 0.0, rise, floor, verdict(rise <= floor)])?;
    }

    let input = ModularState::basis(n, &[position % n])?;
    let (rho_a, _) = discrete::clone(&input, &DiscreteAmplitude::delta(n, 0, 0)?)?;
    let f = discrete::fidelity(&rho_a, &input)?;
    let dev = (f - 1.0).abs();
    table.push(vec![PERFECT_COPY, n as f64, 0.0, f, 1.0, dev, 1e-12, verdict(dev <= 1e-12)])?;
    Ok(Report::new(table))
}
