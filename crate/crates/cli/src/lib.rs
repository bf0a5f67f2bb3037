//! Experiment runners behind the `cvclone` command: fidelity sweeps,
//! uncertainty scans, duality and discrete-model cross-checks and Wigner
//! grid export. Each run yields a [`ResultTable`] whose `pass` column
//! carries the verdict of every check.

mod config;
mod error;
mod report;
mod runners;

pub use config::{Experiment, ExperimentConfig, Params};
pub use error::{CliError, Result};
pub use report::{Attachment, Report, ResultTable};
pub use runners::run;
