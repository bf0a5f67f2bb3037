use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use cvclone_core::cloner::{marginals, AnalyticGaussian, ClonerSpec, Output, SampledAmplitude};

use crate::config::Params;
use crate::error::{config, Result};
use crate::report::{verdict, Report, ResultTable};

/// Sampled amplitudes on the self-dual grid: the dual must be an
/// involution, and for Gaussian amplitudes the dual's variances must match
/// the analytic `1/(4·va)` relation.
pub(crate) fn duality_check(p: &mut Params, rng: &mut ChaCha8Rng) -> Result<Report> {
    let n = p.count("n", 64)?;
    let analytic = p.count("analytic_count", 10)?;
    let random = p.count("random_count", 10)?;
    let vmin = p.float("variance_min", 0.2)?;
    let vmax = p.float("variance_max", 2.0)?;
    let tol = p.float("tolerance", 1e-9)?;
    let vtol = p.float("variance_tolerance", 1e-6)?;
    p.finish()?;
    if !(0.0 < vmin && vmin <= vmax) {
        return Err(config("need 0 < variance_min <= variance_max"));
    }
    if random > 0 && n < 64 {
        return Err(config("n must be at least 64 to resolve random packets"));
    }

    let mut cases: Vec<(Option<AnalyticGaussian>, SampledAmplitude)> = Vec::new();
    for _ in 0..analytic {
        let g = AnalyticGaussian::new(rng.random_range(vmin..=vmax), rng.random_range(vmin..=vmax))?;
        cases.push((Some(g), SampledAmplitude::from_analytic(&g, n)?));
    }
    for _ in 0..random {
        cases.push((None, SampledAmplitude::random(rng, n)));
    }

    let rows = cases
        .par_iter()
        .map(|(g, s)| -> Result<Vec<f64>> {
            let back = s.dual()?.dual()?;
            let involution = s
                .amps()
                .iter()
                .zip(back.amps())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            let spec = ClonerSpec::Sampled(s.clone());
            let a = marginals(&spec, Output::A)?;
            let b = marginals(&spec, Output::B)?;
            let variance = match g {
                Some(g) => [
                    a.vx() - g.va_x(),
                    a.vp() - g.va_p(),
                    b.vx() - g.vb_x(),
                    b.vp() - g.vb_p(),
                ]
                .iter()
                .fold(0.0, |m: f64, d| m.max(d.abs())),
                None => f64::NAN,
            };
            let pass = involution <= tol && (g.is_none() || variance <= vtol);
            let kind = if g.is_some() { 1.0 } else { 2.0 };
            Ok(vec![
                kind,
                a.vx(),
                a.vp(),
                b.vx(),
                b.vp(),
                involution,
                variance,
                tol,
                vtol,
                verdict(pass),
            ])
        })
        .collect::<Result<Vec<_>>>()?;

    let mut table = ResultTable::new(&[
        "kind",
        "va_x",
        "va_p",
        "vb_x",
        "vb_p",
        "involution_deviation",
        "variance_deviation",
        "tolerance",
        "variance_tolerance",
        "pass",
    ]);
    table.set_meta("kind", "1=sampled gaussian 2=random packets");
    table.set_meta("grid", format!("n={n} delta={}", SampledAmplitude::self_dual_spacing(n)));
    for row in rows {
        table.push(row)?;
    }
    Ok(Report::new(table))
}
