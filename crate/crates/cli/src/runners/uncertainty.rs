use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use cvclone_core::cloner::{
    marginals, uncertainty_products, universal_cloner, AnalyticGaussian, ClonerSpec, Output, SampledAmplitude,
};

use crate::config::Params;
use crate::error::{config, Result};
use crate::report::{verdict, Report, ResultTable};

pub(crate) fn uncertainty_scan(p: &mut Params, rng: &mut ChaCha8Rng) -> Result<Report> {
    let analytic = p.count("analytic_count", 200)?;
    let sampled = p.count("sampled_count", 50)?;
    let n = p.count("sampled_n", 64)?;
    let lo = p.float("log10_variance_min", -2.0)?;
    let hi = p.float("log10_variance_max", 2.0)?;
    let tol = p.float("tolerance", 1e-6)?;
    p.finish()?;
    if analytic + sampled == 0 {
        return Err(config("need at least one random cloner spec"));
    }
    if lo > hi {
        return Err(config("log10_variance_min exceeds log10_variance_max"));
    }
    if sampled > 0 && n < 64 {
        return Err(config("sampled_n must be at least 64 to resolve random packets"));
    }

    // drawn sequentially so the specs depend only on the seed
    let mut specs = vec![(0.0, universal_cloner())];
    for _ in 0..analytic {
        let va_x = 10f64.powf(rng.random_range(lo..=hi));
        let va_p = 10f64.powf(rng.random_range(lo..=hi));
        specs.push((1.0, ClonerSpec::Analytic(AnalyticGaussian::new(va_x, va_p)?)));
    }
    for _ in 0..sampled {
        specs.push((2.0, ClonerSpec::Sampled(SampledAmplitude::random(rng, n))));
    }

    let rows = specs
        .par_iter()
        .map(|(kind, spec)| -> Result<Vec<f64>> {
            let a = marginals(spec, Output::A)?;
            let r = uncertainty_products(spec)?;
            Ok(vec![*kind, a.vx(), a.vp(), r.prod_xa_pb, r.prod_xb_pa, tol, verdict(r.satisfied(tol))])
        })
        .collect::<Result<Vec<_>>>()?;

    let mut table = ResultTable::new(&["kind", "va_x", "va_p", "prod_xa_pb", "prod_xb_pa", "tolerance", "pass"]);
    table.set_meta("kind", "0=universal 1=analytic 2=sampled");
    table.set_meta("bound", "0.25");
    for row in rows {
        table.push(row)?;
    }
    Ok(Report::new(table))
}
