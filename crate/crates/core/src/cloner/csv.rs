//! Amplitude grid CSV: a `# n=<n> delta=<delta>` comment line, a
//! `x,p,re,im` header, then one row per grid point.

use std::io::{BufRead, Write};

use num_complex::Complex64;

use crate::error::{Error, Result};

use super::SampledAmplitude;

#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeCsv {
    pub n: usize,
    pub delta: f64,
    /// `(x, p, amplitude)` in file order.
    pub rows: Vec<(f64, f64, Complex64)>,
}

fn parse_err(line: usize, reason: impl Into<String>) -> Error {
    Error::Parse {
        line,
        reason: reason.into(),
    }
}

pub fn read_amplitude_csv<R: BufRead>(input: R) -> Result<AmplitudeCsv> {
    let mut n = None;
    let mut delta = None;
    let mut header_seen = false;
    let mut rows = Vec::new();

    for (idx, line) in input.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            for token in comment.split_whitespace() {
                if let Some(v) = token.strip_prefix("n=") {
                    n = Some(v.parse::<usize>().map_err(|e| parse_err(lineno, e.to_string()))?);
                } else if let Some(v) = token.strip_prefix("delta=") {
                    delta = Some(v.parse::<f64>().map_err(|e| parse_err(lineno, e.to_string()))?);
                }
            }
            continue;
        }
        if !header_seen {
            if line != "x,p,re,im" {
                return Err(parse_err(lineno, format!("expected header `x,p,re,im`, found `{line}`")));
            }
            header_seen = true;
            continue;
        }
        let fields = line
            .split(',')
            .map(|f| f.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| parse_err(lineno, e.to_string()))?;
        if fields.len() != 4 {
            return Err(parse_err(lineno, format!("expected 4 fields, found {}", fields.len())));
        }
        rows.push((fields[0], fields[1], Complex64::new(fields[2], fields[3])));
    }

    let n = n.ok_or_else(|| parse_err(0, "missing `# n=` declaration"))?;
    let delta = delta.ok_or_else(|| parse_err(0, "missing `delta=` declaration"))?;
    Ok(AmplitudeCsv { n, delta, rows })
}

pub(crate) fn write_amplitude_csv<W: Write>(
    mut out: W,
    n: usize,
    delta: f64,
    rows: impl Iterator<Item = (String, String, Complex64)>,
) -> Result<()> {
    writeln!(out, "# n={n} delta={delta:e}")?;
    writeln!(out, "x,p,re,im")?;
    for (x, p, a) in rows {
        writeln!(out, "{x},{p},{:e},{:e}", a.re, a.im)?;
    }
    Ok(())
}

impl SampledAmplitude {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let n = self.n();
        let rows = (0..n).flat_map(move |j| {
            (0..n).map(move |k| (format!("{:e}", self.coord(j)), format!("{:e}", self.coord(k)), self.amp(j, k)))
        });
        write_amplitude_csv(out, n, self.delta(), rows)
    }

    pub fn read_csv<R: BufRead>(input: R) -> Result<Self> {
        let csv = read_amplitude_csv(input)?;
        let (n, delta) = (csv.n, csv.delta);
        if csv.rows.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: csv.rows.len(),
            });
        }
        let c = (n / 2) as isize;
        let index = |v: f64, line: usize| -> Result<usize> {
            let i = (v / delta).round() as isize + c;
            if i < 0 || i >= n as isize || ((i - c) as f64 * delta - v).abs() > 1e-6 * delta {
                return Err(parse_err(line, format!("coordinate {v} is not on the grid")));
            }
            Ok(i as usize)
        };
        let mut amps = vec![Complex64::new(0.0, 0.0); n * n];
        let mut seen = vec![false; n * n];
        for (r, &(x, p, a)) in csv.rows.iter().enumerate() {
            let idx = index(x, r + 3)? * n + index(p, r + 3)?;
            if seen[idx] {
                return Err(parse_err(r + 3, "duplicate grid point"));
            }
            seen[idx] = true;
            amps[idx] = a;
        }
        SampledAmplitude::new(n, delta, amps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn sampled_csv_round_trips(seed in any::<u64>(), n in 2usize..12) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let s = SampledAmplitude::random(&mut rng, n);
            let mut buf = Vec::new();
            s.write_csv(&mut buf).unwrap();
            let back = SampledAmplitude::read_csv(buf.as_slice()).unwrap();
            prop_assert_eq!(back, s);
        }
    }

    #[test]
    fn header_and_declaration() {
        let s = SampledAmplitude::from_fn(2, |_, _| Complex64::new(1.0, 0.0)).unwrap();
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert!(lines.next().unwrap().starts_with("# n=2 delta=1.77245385"));
        assert_eq!(lines.next().unwrap(), "x,p,re,im");
        assert_eq!(text.lines().count(), 6);
    }

    #[test]
    fn malformed_input() {
        assert!(read_amplitude_csv("x,p,re,im\n0,0,1,0\n".as_bytes()).is_err());
        assert!(read_amplitude_csv("# n=1 delta=1\nx,p,w\n".as_bytes()).is_err());
        assert!(read_amplitude_csv("# n=1 delta=1\nx,p,re,im\n0,0,1\n".as_bytes()).is_err());
        assert!(SampledAmplitude::read_csv("# n=1 delta=1\nx,p,re,im\n5,0,1,0\n".as_bytes()).is_err());
        let ok = SampledAmplitude::read_csv("# n=1 delta=1\nx,p,re,im\n0,0,0.6,0.8\n".as_bytes()).unwrap();
        assert_eq!(ok.amp(0, 0), Complex64::new(0.6, 0.8));
    }
}
