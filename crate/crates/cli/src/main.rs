use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use cvclone::{run, Experiment, ExperimentConfig};

/// Run a cloning experiment and write its result table as CSV.
///
/// Exit status: 0 when every check passes, 1 when a check fails, 2 on a
/// usage or configuration error.
#[derive(Debug, Parser)]
#[command(name = "cvclone", version)]
struct Cli {
    experiment: Experiment,

    /// TOML file with `seed`, optional `output_path` and a `[parameters]` table.
    #[arg(long)]
    config: PathBuf,

    /// Override a value from the file. Keys other than `seed` and
    /// `output_path` refer to `[parameters]`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,

    /// Output CSV; attachments are written next to it.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };

    let outcome = ExperimentConfig::load(cli.experiment, &cli.config, &cli.set, cli.out.as_deref()).and_then(|cfg| {
        let out = cfg.output_path.clone();
        let report = run(cfg)?;
        let written = report.write(&out)?;
        Ok((report, written))
    });

    match outcome {
        Ok((report, written)) => {
            let failures = report.table.failures();
            for path in &written {
                eprintln!("wrote {}", path.display());
            }
            if failures == 0 {
                eprintln!("{}: all {} rows pass", cli.experiment, report.table.rows().len());
                ExitCode::SUCCESS
            } else {
                eprintln!("{}: {failures} of {} rows FAIL", cli.experiment, report.table.rows().len());
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("cvclone: {e}");
            ExitCode::from(2)
        }
    }
}
