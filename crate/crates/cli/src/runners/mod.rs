use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cvclone_core::gaussian::GridSpec;

use crate::config::{Experiment, ExperimentConfig, Params};
use crate::error::Result;
use crate::report::Report;

mod discrete;
mod duality;
mod fidelity;
mod uncertainty;
mod wigner;

/// Runs one experiment. All randomness comes from a single ChaCha8
/// generator seeded with `config.seed`, and parallel work is collected in
/// input order, so equal configs give byte-identical output.
pub fn run(config: ExperimentConfig) -> Result<Report> {
    let mut params = config.parameters.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut report = match config.experiment {
        Experiment::FidelitySweep => fidelity::fidelity_sweep(&mut params)?,
        Experiment::SqueezedSweep => fidelity::squeezed_sweep(&mut params)?,
        Experiment::UncertaintyScan => uncertainty::uncertainty_scan(&mut params, &mut rng)?,
        Experiment::DualityCheck => duality::duality_check(&mut params, &mut rng)?,
        Experiment::DiscreteVerify => discrete::discrete_verify(&mut params, &mut rng)?,
        Experiment::WignerExport => wigner::wigner_export(&mut params)?,
    };

    let mut meta = vec![
        ("experiment".to_string(), config.experiment.to_string()),
        ("seed".to_string(), config.seed.to_string()),
        ("rng".to_string(), "ChaCha8".to_string()),
        ("engine".to_string(), format!("cvclone-core {}", cvclone_core::VERSION)),
        ("driver".to_string(), format!("cvclone {}", env!("CARGO_PKG_VERSION"))),
    ];
    meta.append(&mut report.table.metadata);
    meta.extend(params.resolved().iter().map(|(k, v)| (format!("param.{k}"), v.clone())));
    report.table.metadata = meta;
    Ok(report)
}

fn grid_spec(p: &mut Params) -> Result<GridSpec> {
    let half = p.float("grid_half_extent", 8.0)?;
    let points = p.count("grid_points", 257)?;
    let grid = GridSpec::symmetric(half, points);
    grid.validate()?;
    Ok(grid)
}
