//! Experiment configuration: a TOML file with an optional top-level `seed`
//! and `output_path` and a `[parameters]` table of scalars, plus `--set`
//! overrides that win over the file.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use toml::{Table, Value};

use crate::error::{config, CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum)]
pub enum Experiment {
    FidelitySweep,
    UncertaintyScan,
    DualityCheck,
    DiscreteVerify,
    WignerExport,
    SqueezedSweep,
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::FidelitySweep => "fidelity-sweep",
            Experiment::UncertaintyScan => "uncertainty-scan",
            Experiment::DualityCheck => "duality-check",
            Experiment::DiscreteVerify => "discrete-verify",
            Experiment::WignerExport => "wigner-export",
            Experiment::SqueezedSweep => "squeezed-sweep",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub seed: u64,
    pub parameters: Params,
    pub output_path: PathBuf,
}

impl ExperimentConfig {
    pub fn load(experiment: Experiment, path: &Path, overrides: &[String], out: Option<&Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml(experiment, &text, overrides, out)
    }

    pub fn from_toml(experiment: Experiment, text: &str, overrides: &[String], out: Option<&Path>) -> Result<Self> {
        let mut table: Table = text.parse().map_err(|e: toml::de::Error| config(e.to_string()))?;
        for item in overrides {
            apply_override(&mut table, item)?;
        }

        let mut seed = 0;
        let mut output_path = None;
        let mut parameters = BTreeMap::new();
        for (key, value) in table {
            match key.as_str() {
                "seed" => {
                    seed = value
                        .as_integer()
                        .and_then(|s| u64::try_from(s).ok())
                        .ok_or_else(|| config(format!("seed must be a non-negative integer, got {value}")))?;
                }
                "experiment" => {
                    let named = value
                        .as_str()
                        .and_then(|s| Experiment::from_str(s, false).ok())
                        .ok_or_else(|| config(format!("unknown experiment {value}")))?;
                    if named != experiment {
                        return Err(config(format!(
                            "config is for {named} but {experiment} was requested"
                        )));
                    }
                }
                "output_path" => {
                    let p = value
                        .as_str()
                        .ok_or_else(|| config("output_path must be a string"))?;
                    output_path = Some(PathBuf::from(p));
                }
                "parameters" => {
                    let Value::Table(t) = value else {
                        return Err(config("`parameters` must be a table"));
                    };
                    for (name, v) in t {
                        if matches!(v, Value::Array(_) | Value::Table(_) | Value::Datetime(_)) {
                            return Err(config(format!("parameter `{name}` must be a scalar")));
                        }
                        parameters.insert(name, v);
                    }
                }
                other => return Err(config(format!("unknown top-level key `{other}`"))),
            }
        }

        let output_path = out
            .map(Path::to_path_buf)
            .or(output_path)
            .ok_or_else(|| config("no output path: pass --out or set output_path"))?;
        Ok(Self {
            experiment,
            seed,
            parameters: Params::new(parameters),
            output_path,
        })
    }
}

fn apply_override(table: &mut Table, item: &str) -> Result<()> {
    let (key, raw) = item
        .split_once('=')
        .ok_or_else(|| config(format!("--set expects key=value, got `{item}`")))?;
    let (key, value) = (key.trim(), parse_scalar(raw.trim()));
    match key {
        "seed" | "experiment" | "output_path" => {
            table.insert(key.to_string(), value);
        }
        _ => {
            let name = key.strip_prefix("parameters.").unwrap_or(key);
            let params = table
                .entry("parameters")
                .or_insert_with(|| Value::Table(Table::new()));
            let Value::Table(params) = params else {
                return Err(config("`parameters` must be a table"));
            };
            params.insert(name.to_string(), value);
        }
    }
    Ok(())
}

// Anything that is not a TOML literal is taken as a bare string.
fn parse_scalar(raw: &str) -> Value {
    format!("v = {raw}")
        .parse::<Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| Value::String(raw.to_string()))
}

/// Scalar parameters of one run. Runners take values out by name with a
/// default; [`Params::finish`] then rejects anything left over, so a typo in
/// a key is an error instead of a silently ignored setting.
#[derive(Debug, Clone, Default)]
pub struct Params {
    values: BTreeMap<String, Value>,
    resolved: Vec<(String, String)>,
}

impl Params {
    pub fn new(values: BTreeMap<String, Value>) -> Self {
        Self {
            values,
            resolved: Vec::new(),
        }
    }

    /// Effective value of every parameter read so far, defaults included.
    pub fn resolved(&self) -> &[(String, String)] {
        &self.resolved
    }

    fn take(&mut self, name: &str) -> Option<Value> {
        self.values.remove(name)
    }

    fn record(&mut self, name: &str, value: impl fmt::Display) {
        self.resolved.push((name.to_string(), value.to_string()));
    }

    pub fn float(&mut self, name: &str, default: f64) -> Result<f64> {
        let v = match self.take(name) {
            None => default,
            Some(Value::Float(f)) => f,
            Some(Value::Integer(i)) => i as f64,
            Some(other) => return Err(config(format!("parameter `{name}` must be a number, got {other}"))),
        };
        if !v.is_finite() {
            return Err(config(format!("parameter `{name}` must be finite")));
        }
        self.record(name, crate::report::format_value(v));
        Ok(v)
    }

    pub fn count(&mut self, name: &str, default: usize) -> Result<usize> {
        let v = match self.take(name) {
            None => default,
            Some(Value::Integer(i)) => usize::try_from(i)
                .map_err(|_| config(format!("parameter `{name}` must be a non-negative integer")))?,
            Some(other) => {
                return Err(config(format!(
                    "parameter `{name}` must be a non-negative integer, got {other}"
                )))
            }
        };
        self.record(name, v);
        Ok(v)
    }

    pub fn flag(&mut self, name: &str, default: bool) -> Result<bool> {
        let v = match self.take(name) {
            None => default,
            Some(Value::Boolean(b)) => b,
            Some(other) => return Err(config(format!("parameter `{name}` must be true or false, got {other}"))),
        };
        self.record(name, v);
        Ok(v)
    }

    pub fn text(&mut self, name: &str, default: &str) -> Result<String> {
        let v = match self.take(name) {
            None => default.to_string(),
            Some(Value::String(s)) => s,
            Some(other) => other.to_string(),
        };
        self.record(name, &v);
        Ok(v)
    }

    /// One of `options`; the first is the default.
    pub fn choice(&mut self, name: &str, options: &[&'static str]) -> Result<&'static str> {
        let v = self.text(name, options[0])?;
        options
            .iter()
            .find(|o| **o == v)
            .copied()
            .ok_or_else(|| config(format!("parameter `{name}` must be one of {options:?}, got `{v}`")))
    }

    /// `<name>_min`, `<name>_max`, `<name>_steps`, expanded to evenly spaced
    /// points including both ends.
    pub fn range(&mut self, name: &str, default: (f64, f64, usize)) -> Result<Vec<f64>> {
        let min = self.float(&format!("{name}_min"), default.0)?;
        let max = self.float(&format!("{name}_max"), default.1)?;
        let steps = self.count(&format!("{name}_steps"), default.2)?;
        if steps < 1 {
            return Err(config(format!("range `{name}` needs at least 1 step")));
        }
        if min > max {
            return Err(config(format!("range `{name}` has min {min} > max {max}")));
        }
        if steps == 1 {
            return Ok(vec![min]);
        }
        let step = (max - min) / (steps - 1) as f64;
        Ok((0..steps)
            .map(|i| if i == steps - 1 { max } else { min + i as f64 * step })
            .collect())
    }

    pub fn finish(&self) -> Result<()> {
        if self.values.is_empty() {
            return Ok(());
        }
        let names: Vec<&str> = self.values.keys().map(String::as_str).collect();
        Err(config(format!("unknown parameter(s) for this experiment: {}", names.join(", "))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(text: &str, sets: &[&str]) -> Result<ExperimentConfig> {
        let sets: Vec<String> = sets.iter().map(|s| s.to_string()).collect();
        ExperimentConfig::from_toml(Experiment::FidelitySweep, text, &sets, Some(Path::new("out.csv")))
    }

    #[test]
    fn flags_override_the_file() {
        let cfg = load("seed = 3\n[parameters]\nvx_min = 0.1\n", &["seed=9", "vx_min=0.4", "parameters.mode=x"]).unwrap();
        assert_eq!(cfg.seed, 9);
        let mut p = cfg.parameters;
        assert_eq!(p.float("vx_min", 0.0).unwrap(), 0.4);
        assert_eq!(p.text("mode", "").unwrap(), "x");
        p.finish().unwrap();
    }

    #[test]
    fn seed_defaults_to_zero() {
        assert_eq!(load("", &[]).unwrap().seed, 0);
    }

    #[test]
    fn ranges() {
        let mut p = load("[parameters]\nv_min = 0\nv_max = 1\nv_steps = 5\n", &[]).unwrap().parameters;
        assert_eq!(p.range("v", (0.0, 0.0, 1)).unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let mut p = load("[parameters]\nv_min = 2\nv_max = 1\n", &[]).unwrap().parameters;
        assert!(p.range("v", (0.0, 0.0, 3)).is_err());
        let mut p = load("[parameters]\nv_steps = 0\n", &[]).unwrap().parameters;
        assert!(p.range("v", (0.0, 1.0, 3)).is_err());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(load("seed = -1", &[]).is_err());
        assert!(load("bogus = 1", &[]).is_err());
        assert!(load("experiment = \"duality-check\"", &[]).is_err());
        assert!(load("[parameters]\nv = [1, 2]\n", &[]).is_err());
        assert!(load("", &["novalue"]).is_err());
        assert!(ExperimentConfig::from_toml(Experiment::FidelitySweep, "", &[], None).is_err());
        let mut p = load("[parameters]\nunused = 1\n", &[]).unwrap().parameters;
        p.float("used", 0.0).unwrap();
        assert!(p.finish().is_err());
    }
}
