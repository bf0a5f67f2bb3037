use rayon::prelude::*;

use cvclone_core::cloner::{marginals, squeezed_cloner, universal_cloner, Output};
use cvclone_core::gaussian::{
    convolve_wigner, fidelity_coherent_vs_noisy, fidelity_squeezed_vs_noisy, gaussian_overlap, wigner_of_gaussian,
    GaussianState, ShiftDistribution,
};

use super::grid_spec;
use crate::config::Params;
use crate::error::Result;
use crate::report::{verdict, Report, ResultTable};

const SIGMA_RANGE: (f64, f64, usize) = (0.5, 4.0, 8);

pub(crate) fn fidelity_sweep(p: &mut Params) -> Result<Report> {
    match p.choice("grid", &["noise", "sigma"])? {
        "noise" => noise_sweep(p),
        _ => sigma_sweep(p),
    }
}

/// Coherent-state fidelity over a grid of shift variances. The closed form
/// is checked against the general Gaussian overlap and optionally against
/// a convolved Wigner grid.
fn noise_sweep(p: &mut Params) -> Result<Report> {
    let vxs = p.range("vx", (0.0, 1.0, 5))?;
    let vps = p.range("vp", (0.0, 1.0, 5))?;
    let alpha = (p.float("alpha_re", 0.0)?, p.float("alpha_im", 0.0)?);
    let tol = p.float("tolerance", 1e-12)?;
    let wigner = p.flag("wigner", false)?;
    let wigner_tol = p.float("wigner_tolerance", 1e-4)?;
    let grid = grid_spec(p)?;
    p.finish()?;

    let state = GaussianState::coherent(alpha.0, alpha.1);
    let input = if wigner {
        Some(wigner_of_gaussian(&state, &grid)?)
    } else {
        None
    };
    let points: Vec<(f64, f64)> = vxs
        .iter()
        .flat_map(|&vx| vps.iter().map(move |&vp| (vx, vp)))
        .collect();
    let rows = points
        .par_iter()
        .map(|&(vx, vp)| -> Result<Vec<f64>> {
            let noise = ShiftDistribution::new(vx, vp)?;
            let f = fidelity_coherent_vs_noisy(alpha, &noise);
            let overlap = gaussian_overlap(&state, &state.apply_cloner_noise(&noise)?)?;
            let dev = (f - overlap).abs();
            let mut pass = dev <= tol;
            let mut row = vec![vx, vp, f, overlap, dev, tol];
            if let Some(input) = &input {
                let w = convolve_wigner(input, &noise)?.overlap(input)?;
                let wdev = (w - f).abs();
                pass &= wdev <= wigner_tol;
                row.extend([w, wdev, wigner_tol]);
            }
            row.push(verdict(pass));
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut columns = vec!["vx", "vp", "fidelity", "overlap_fidelity", "deviation", "tolerance"];
    if wigner {
        columns.extend(["wigner_fidelity", "wigner_deviation", "wigner_tolerance"]);
    }
    columns.push("pass");
    let mut table = ResultTable::new(&columns);
    table.set_meta("state", format!("coherent({}, {})", alpha.0, alpha.1));
    for row in rows {
        table.push(row)?;
    }
    Ok(Report::new(table))
}

/// Squeezed-state fidelity over σ for the universal or the matched cloner.
fn sigma_sweep(p: &mut Params) -> Result<Report> {
    let sigmas = p.range("sigma", SIGMA_RANGE)?;
    let cloner = p.choice("cloner", &["universal", "matched"])?;
    let tol = p.float("tolerance", 1e-12)?;
    p.finish()?;
    if sigmas[0] <= 0.0 {
        return Err(crate::error::config("sigma must be > 0"));
    }

    let rows = sigmas
        .par_iter()
        .map(|&sigma| -> Result<Vec<f64>> {
            let spec = match cloner {
                "matched" => squeezed_cloner(sigma)?,
                _ => universal_cloner(),
            };
            let noise = marginals(&spec, Output::A)?;
            let f = fidelity_squeezed_vs_noisy(sigma, &noise)?;
            let state = GaussianState::squeezed(sigma, 0.0, 0.0)?;
            let overlap = gaussian_overlap(&state, &state.apply_cloner_noise(&noise)?)?;
            let dev = (f - overlap).abs();
            Ok(vec![sigma, noise.vx(), noise.vp(), f, overlap, dev, tol, verdict(dev <= tol)])
        })
        .collect::<Result<Vec<_>>>()?;

    let mut table = ResultTable::new(&[
        "sigma",
        "vx",
        "vp",
        "fidelity",
        "overlap_fidelity",
        "deviation",
        "tolerance",
        "pass",
    ]);
    table.set_meta("cloner", cloner);
    for row in rows {
        table.push(row)?;
    }
    Ok(Report::new(table))
}

/// Matched squeezed cloner against the universal one. Passes when the
/// matched fidelity is 2/3 and the universal one is never better.
pub(crate) fn squeezed_sweep(p: &mut Params) -> Result<Report> {
    let sigmas = p.range("sigma", SIGMA_RANGE)?;
    let tol = p.float("tolerance", 1e-12)?;
    p.finish()?;
    if sigmas[0] <= 0.0 {
        return Err(crate::error::config("sigma must be > 0"));
    }

    let universal = marginals(&universal_cloner(), Output::A)?;
    let rows = sigmas
        .par_iter()
        .map(|&sigma| -> Result<Vec<f64>> {
            let matched = fidelity_squeezed_vs_noisy(sigma, &marginals(&squeezed_cloner(sigma)?, Output::A)?)?;
            let plain = fidelity_squeezed_vs_noisy(sigma, &universal)?;
            let dev = (matched - 2.0 / 3.0).abs();
            let pass = dev <= tol && plain <= matched + tol;
            Ok(vec![sigma, matched, plain, dev, tol, verdict(pass)])
        })
        .collect::<Result<Vec<_>>>()?;

    let mut table = ResultTable::new(&[
        "sigma",
        "matched_fidelity",
        "universal_fidelity",
        "deviation",
        "tolerance",
        "pass",
    ]);
    table.set_meta("expected_matched_fidelity", "2/3");
    for row in rows {
        table.push(row)?;
    }
    Ok(Report::new(table))
}
