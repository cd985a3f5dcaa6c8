//! Text formats.
//!
//! Streamline files hold one point per line as whitespace-separated decimal
//! coordinates, with a blank line between streamlines and an optional first
//! line `# dim=D count=N`. The writer always emits the header and prints
//! every coordinate with 17 significant digits, which is enough to read back
//! the identical `f64`.
//!
//! Results files are CSV with the header
//! `policy,p,repetition,seed,correlation,wall_time_ms`.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::embedding::EmbeddedDataset;
use crate::error::{Error, Result};
use crate::evaluation::ExperimentReport;
use crate::geometry::{Dataset, Streamline};
use crate::selection::Policy;

pub const RESULTS_HEADER: &str = "policy,p,repetition,seed,correlation,wall_time_ms";

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_header(line: &str, lineno: usize) -> Result<(Option<usize>, Option<usize>)> {
    let (mut dim, mut count) = (None, None);
    for token in line.trim_start_matches('#').split_whitespace() {
        let (key, value) = token
            .split_once('=')
            .ok_or_else(|| parse_error(lineno, format!("malformed header field '{token}'")))?;
        let value: usize = value
            .parse()
            .map_err(|_| parse_error(lineno, format!("bad header value '{value}'")))?;
        match key {
            "dim" => dim = Some(value),
            "count" => count = Some(value),
            _ => return Err(parse_error(lineno, format!("unknown header key '{key}'"))),
        }
    }
    Ok((dim, count))
}

/// Parses the streamline text format and validates the result.
pub fn parse_streamlines(text: &str) -> Result<Dataset> {
    let mut header = (None, None);
    let mut streamlines = Vec::new();
    let mut current: Vec<f64> = Vec::new();
    let mut current_dim = 0;

    let mut flush = |coords: &mut Vec<f64>, dim: usize| -> Result<()> {
        if !coords.is_empty() {
            streamlines.push(Streamline::new(dim, std::mem::take(coords))?);
        }
        Ok(())
    };

    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if lineno == 1 && line.starts_with('#') {
            header = parse_header(line, lineno)?;
            continue;
        }
        if line.is_empty() {
            flush(&mut current, current_dim)?;
            continue;
        }
        let start = current.len();
        for token in line.split_whitespace() {
            let v: f64 = token
                .parse()
                .map_err(|_| parse_error(lineno, format!("not a number: '{token}'")))?;
            current.push(v);
        }
        let dim = current.len() - start;
        if start == 0 {
            current_dim = dim;
        } else if dim != current_dim {
            return Err(parse_error(
                lineno,
                format!("point has {dim} coordinates, streamline has {current_dim}"),
            ));
        }
    }
    flush(&mut current, current_dim)?;

    let dataset = Dataset::try_new(streamlines)?;
    if let Some(dim) = header.0 {
        if dim != dataset.dim() {
            return Err(parse_error(
                1,
                format!("header dim={dim}, data has {}", dataset.dim()),
            ));
        }
    }
    if let Some(count) = header.1 {
        if count != dataset.len() {
            return Err(parse_error(
                1,
                format!("header count={count}, data has {}", dataset.len()),
            ));
        }
    }
    Ok(dataset)
}

pub fn read_streamlines(path: impl AsRef<Path>) -> Result<Dataset> {
    parse_streamlines(&fs::read_to_string(path)?)
}

/// Renders a dataset in the streamline text format.
pub fn format_streamlines(dataset: &Dataset) -> String {
    let mut out = format!("# dim={} count={}\n", dataset.dim(), dataset.len());
    for (k, s) in dataset.streamlines().iter().enumerate() {
        if k > 0 {
            out.push('\n');
        }
        for point in s.points() {
            let fields: Vec<String> = point.iter().map(|c| format!("{c:.16e}")).collect();
            out.push_str(&fields.join(" "));
            out.push('\n');
        }
    }
    out
}

pub fn write_streamlines(dataset: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    dataset.validate()?;
    fs::write(path, format_streamlines(dataset))?;
    Ok(())
}

/// One integer per line.
pub fn write_indices(indices: &[usize], mut out: impl Write) -> Result<()> {
    for i in indices {
        writeln!(out, "{i}")?;
    }
    Ok(())
}

/// N rows of p comma-separated values, no header.
pub fn write_embedded_csv(embedded: &EmbeddedDataset, mut out: impl Write) -> Result<()> {
    for i in 0..embedded.len() {
        let fields: Vec<String> = embedded.row(i).iter().map(|v| v.to_string()).collect();
        writeln!(out, "{}", fields.join(","))?;
    }
    Ok(())
}

/// One row per (policy, p, repetition). With `with_timing = false` the
/// `wall_time_ms` field is left empty so reruns produce identical bytes.
pub fn write_results_csv(
    reports: &[ExperimentReport],
    with_timing: bool,
    mut out: impl Write,
) -> Result<()> {
    writeln!(out, "{RESULTS_HEADER}")?;
    for report in reports {
        for rep in 0..report.correlations.len() {
            let time = if with_timing {
                format!("{:.3}", report.wall_times[rep].as_secs_f64() * 1e3)
            } else {
                String::new()
            };
            writeln!(
                out,
                "{},{},{},{},{},{}",
                report.policy, report.p, rep, report.seeds[rep], report.correlations[rep], time
            )?;
        }
    }
    Ok(())
}

/// A parsed results CSV row.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub policy: Policy,
    pub p: usize,
    pub repetition: usize,
    pub seed: u64,
    pub correlation: f64,
    pub wall_time_ms: Option<f64>,
}

pub fn parse_results_csv(text: &str) -> Result<Vec<ResultRow>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == RESULTS_HEADER => {}
        _ => return Err(parse_error(1, "missing results header")),
    }
    lines
        .filter(|(_, l)| !l.is_empty())
        .map(|(i, line)| {
            let lineno = i + 1;
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 6 {
                return Err(parse_error(
                    lineno,
                    format!("expected 6 fields, got {}", f.len()),
                ));
            }
            let bad = |what: &str| parse_error(lineno, format!("bad {what}"));
            Ok(ResultRow {
                policy: f[0].parse().map_err(|_| bad("policy"))?,
                p: f[1].parse().map_err(|_| bad("p"))?,
                repetition: f[2].parse().map_err(|_| bad("repetition"))?,
                seed: f[3].parse().map_err(|_| bad("seed"))?,
                correlation: f[4].parse().map_err(|_| bad("correlation"))?,
                wall_time_ms: match f[5] {
                    "" => None,
                    t => Some(t.parse().map_err(|_| bad("wall_time_ms"))?),
                },
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_two_points() {
        let ds = parse_streamlines("0 0\n\n3 4\n").unwrap();
        assert_eq!(ds.len(), 2);
        assert_eq!(ds[1].coords(), &[3.0, 4.0]);
        assert_eq!(ds.dim(), 2);
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(
            parse_streamlines("0 0 0\n1 1\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_streamlines("0 0 0\n\n1 1\n"),
            Err(Error::MixedDimension { index: 1, .. })
        ));
        assert!(matches!(parse_streamlines(""), Err(Error::EmptyDataset)));
        assert!(matches!(
            parse_streamlines("# dim=2 count=0\n"),
            Err(Error::EmptyDataset)
        ));
        assert!(matches!(
            parse_streamlines("1 x\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_streamlines("1 nan\n"),
            Err(Error::NonFiniteCoordinate { index: 0 })
        ));
        assert!(matches!(
            parse_streamlines("# dim=3 count=1\n1 2\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_streamlines("# dim=2 count=2\n1 2\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn writer_layout() {
        let ds = Dataset::try_new(vec![
            Streamline::from_points(&[[0.0, 1.0], [0.5, -2.0]]).unwrap(),
            Streamline::point(&[3.0, 4.0]).unwrap(),
        ])
        .unwrap();
        let text = format_streamlines(&ds);
        assert_eq!(
            text,
            "# dim=2 count=2\n\
             0.0000000000000000e0 1.0000000000000000e0\n\
             5.0000000000000000e-1 -2.0000000000000000e0\n\
             \n\
             3.0000000000000000e0 4.0000000000000000e0\n"
        );
        assert_eq!(parse_streamlines(&text).unwrap(), ds);
    }

    #[test]
    fn seventeen_digits_round_trip() {
        let tricky = [
            0.1,
            1.0 / 3.0,
            f64::MIN_POSITIVE,
            1e300,
            -2.2250738585072014e-308,
            123456.789e-7,
        ];
        let ds = Dataset::try_new(vec![Streamline::new(1, tricky.to_vec()).unwrap()]).unwrap();
        let back = parse_streamlines(&format_streamlines(&ds)).unwrap();
        assert_eq!(back, ds);
    }

    #[test]
    fn results_csv_round_trip() {
        let report = ExperimentReport {
            policy: Policy::Sff,
            p: 5,
            repetitions: 2,
            seeds: vec![3, 4],
            correlations: vec![0.91, 0.875],
            mean: 0.8925,
            std: 0.0,
            wall_times: vec![std::time::Duration::from_micros(1500); 2],
        };
        let mut buf = Vec::new();
        write_results_csv(std::slice::from_ref(&report), true, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with(
            "policy,p,repetition,seed,correlation,wall_time_ms\nsff,5,0,3,0.91,1.500\n"
        ));
        let rows = parse_results_csv(&text).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[1].correlation, 0.875);
        assert_eq!(rows[1].wall_time_ms, Some(1.5));

        let mut buf = Vec::new();
        write_results_csv(&[report], false, &mut buf).unwrap();
        let rows = parse_results_csv(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(rows[0].wall_time_ms, None);
    }
}
