use std::fmt::Write as _;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use crate::error::{config, CliError, Result};

/// Named numeric columns plus ordered metadata. Written as CSV with the
/// metadata as a `# key=value` preamble.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    columns: Vec<String>,
    rows: Vec<Vec<f64>>,
    pub(crate) metadata: Vec<(String, String)>,
}

pub(crate) fn verdict(pass: bool) -> f64 {
    if pass {
        1.0
    } else {
        0.0
    }
}

impl ResultTable {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            metadata: Vec::new(),
        }
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn metadata(&self) -> &[(String, String)] {
        &self.metadata
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.metadata.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn set_meta(&mut self, key: &str, value: impl ToString) {
        let value = value.to_string().replace(['\n', '\r'], " ");
        match self.metadata.iter_mut().find(|(k, _)| k == key) {
            Some(entry) => entry.1 = value,
            None => self.metadata.push((key.to_string(), value)),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(CliError::Arity {
                expected: self.columns.len(),
                found: row.len(),
            });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    /// Rows whose `pass` column is not 1.
    pub fn failures(&self) -> usize {
        self.column("pass")
            .map(|p| p.iter().filter(|&&v| v != 1.0).count())
            .unwrap_or(0)
    }

    pub fn all_pass(&self) -> bool {
        self.failures() == 0
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.metadata {
            let _ = writeln!(s, "# {k}={v}");
        }
        s.push_str(&self.columns.join(","));
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&v| format_value(v)).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    pub fn read_csv<R: BufRead>(input: R) -> Result<Self> {
        let mut metadata = Vec::new();
        let mut columns: Option<Vec<String>> = None;
        let mut rows = Vec::new();
        for (idx, line) in input.lines().enumerate() {
            let line = line.map_err(|source| CliError::Io {
                path: PathBuf::from("<table>"),
                source,
            })?;
            if let Some(meta) = line.strip_prefix("# ") {
                let (k, v) = meta.split_once('=').unwrap_or((meta, ""));
                metadata.push((k.to_string(), v.to_string()));
                continue;
            }
            match &columns {
                None => columns = Some(line.split(',').map(str::to_string).collect()),
                Some(cols) => {
                    let row = line
                        .split(',')
                        .map(|c| c.parse::<f64>())
                        .collect::<std::result::Result<Vec<_>, _>>()
                        .map_err(|e| config(format!("line {}: {e}", idx + 1)))?;
                    if row.len() != cols.len() {
                        return Err(CliError::Arity {
                            expected: cols.len(),
                            found: row.len(),
                        });
                    }
                    rows.push(row);
                }
            }
        }
        Ok(Self {
            columns: columns.ok_or_else(|| config("table has no header"))?,
            rows,
            metadata,
        })
    }
}

/// Shortest round-trip form; integers plain, very small or large
/// magnitudes in exponent form.
pub(crate) fn format_value(v: f64) -> String {
    let a = v.abs();
    if v.fract() == 0.0 && a < 1e15 {
        format!("{v:.0}")
    } else if a == 0.0 || (1e-4..1e6).contains(&a) || !v.is_finite() {
        v.to_string()
    } else {
        format!("{v:e}")
    }
}

/// Extra file written next to the table, e.g. a Wigner grid.
#[derive(Debug, Clone)]
pub struct Attachment {
    pub suffix: String,
    pub bytes: Vec<u8>,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub table: ResultTable,
    pub attachments: Vec<Attachment>,
}

impl Report {
    pub fn new(table: ResultTable) -> Self {
        Self {
            table,
            attachments: Vec::new(),
        }
    }

    /// `results.csv` with suffix `input` becomes `results_input.csv`.
    pub fn attachment_path(out: &Path, suffix: &str) -> PathBuf {
        let stem = out.file_stem().map(|s| s.to_string_lossy()).unwrap_or_default();
        out.with_file_name(format!("{stem}_{suffix}.csv"))
    }

    /// Writes the table and every attachment; returns the paths written.
    pub fn write(&self, out: &Path) -> Result<Vec<PathBuf>> {
        let mut written = vec![out.to_path_buf()];
        write_file(out, self.table.to_csv().as_bytes())?;
        for a in &self.attachments {
            let path = Self::attachment_path(out, &a.suffix);
            write_file(&path, &a.bytes)?;
            written.push(path);
        }
        Ok(written)
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    let io = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut f = std::fs::File::create(path).map_err(io)?;
    f.write_all(bytes).map_err(io)
}
