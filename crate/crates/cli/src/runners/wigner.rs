use cvclone_core::gaussian::{convolve_wigner, wigner_of_gaussian, GaussianState, ShiftDistribution, WignerGrid};

use super::grid_spec;
use crate::config::Params;
use crate::error::Result;
use crate::report::{verdict, Attachment, Report, ResultTable};

/// Input and cloned Wigner grids plus their moments. Means are unchanged
/// and the shift variances add to the input variances.
pub(crate) fn wigner_export(p: &mut Params) -> Result<Report> {
    let kind = p.choice("state", &["vacuum", "coherent", "squeezed"])?;
    let alpha = (p.float("alpha_re", 0.0)?, p.float("alpha_im", 0.0)?);
    let sigma = p.float("sigma", 1.0)?;
    let noise = ShiftDistribution::new(p.float("vx", 0.5)?, p.float("vp", 0.5)?)?;
    let tol = p.float("tolerance", 1e-6)?;
    let grid = grid_spec(p)?;
    p.finish()?;

    let state = match kind {
        "vacuum" => GaussianState::vacuum(1),
        "coherent" => GaussianState::coherent(alpha.0, alpha.1),
        _ => GaussianState::squeezed(sigma, alpha.0, alpha.1)?,
    };
    let input = wigner_of_gaussian(&state, &grid)?;
    let output = convolve_wigner(&input, &noise)?;

    let mut table = ResultTable::new(&[
        "grid",
        "mass",
        "mean_x",
        "mean_p",
        "var_x",
        "var_p",
        "expected_mean_x",
        "expected_mean_p",
        "expected_var_x",
        "expected_var_p",
        "deviation",
        "tolerance",
        "pass",
    ]);
    let (mx, mp) = (state.mean()[0], state.mean()[1]);
    let (vx, vp) = (state.cov()[(0, 0)], state.cov()[(1, 1)]);
    for (idx, w, extra) in [(0.0, &input, (0.0, 0.0)), (1.0, &output, (noise.vx(), noise.vp()))] {
        let m = w.moments();
        let expected = [mx, mp, vx + extra.0, vp + extra.1];
        let got = [m.mean_x, m.mean_p, m.var_x, m.var_p];
        let dev = got
            .iter()
            .zip(&expected)
            .map(|(g, e)| (g - e).abs())
            .fold((m.mass - 1.0).abs(), f64::max);
        let mut row = vec![idx, m.mass];
        row.extend(got);
        row.extend(expected);
        row.extend([dev, tol, verdict(dev <= tol)]);
        table.push(row)?;
    }
    table.set_meta("grid", "0=input 1=output");
    table.set_meta("grid_max_difference", output.max_abs_diff(&input)?);

    let mut report = Report::new(table);
    report.attachments = vec![attach("input", &input)?, attach("output", &output)?];
    Ok(report)
}

fn attach(suffix: &str, w: &WignerGrid) -> Result<Attachment> {
    let mut bytes = Vec::new();
    w.write_csv(&mut bytes)?;
    Ok(Attachment {
        suffix: suffix.to_string(),
        bytes,
    })
}
