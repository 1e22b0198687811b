//! Two-column CSV input.
//!
//! Rows are read as they appear. With [`Transform::AbsLogReturns`] the two
//! price series are assumed to be aligned already (same date on each row);
//! no calendar matching is attempted.

use std::fs::File;
use std::io::{self, Read, Write};
use std::path::Path;

use clap::ValueEnum;
use qstail::BivariateSample;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Transform {
    /// Use the values as given.
    None,
    /// `(|log(P1_t / P1_{t-1})|, |log(P2_t / P2_{t-1})|)`.
    AbsLogReturns,
}

/// Numeric rows of a two-column table with line numbers. A first row that
/// does not parse as numbers is treated as a header.
pub fn read_table<R: Read>(reader: R) -> Result<Vec<(usize, f64, f64)>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut rows = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let record = record?;
        let line = record.position().map_or(i + 1, |p| p.line() as usize);
        if record.len() != 2 {
            return Err(CliError::Parse {
                line,
                message: format!("expected 2 columns, found {}", record.len()),
            });
        }
        let parsed: Vec<Option<f64>> = record
            .iter()
            .map(|c| c.parse::<f64>().ok().filter(|v| v.is_finite()))
            .collect();
        match (parsed[0], parsed[1]) {
            (Some(a), Some(b)) => rows.push((line, a, b)),
            _ if i == 0 => continue,
            _ => {
                return Err(CliError::Parse {
                    line,
                    message: format!(
                        "non-numeric cell in {:?}",
                        record.iter().collect::<Vec<_>>()
                    ),
                })
            }
        }
    }
    Ok(rows)
}

pub fn ingest_reader<R: Read>(reader: R, transform: Transform) -> Result<BivariateSample> {
    let rows = read_table(reader)?;
    let pairs: Vec<(f64, f64)> = match transform {
        Transform::None => {
            for &(line, a, b) in &rows {
                if a < 0.0 || b < 0.0 {
                    let value = if a < 0.0 { a } else { b };
                    return Err(CliError::NegativeValue { line, value });
                }
            }
            rows.iter().map(|&(_, a, b)| (a, b)).collect()
        }
        Transform::AbsLogReturns => {
            for &(line, a, b) in &rows {
                if a <= 0.0 || b <= 0.0 {
                    let value = if a <= 0.0 { a } else { b };
                    return Err(CliError::NonPositivePrice { line, value });
                }
            }
            if rows.len() < 2 {
                return Err(CliError::TooFewRows { rows: rows.len() });
            }
            rows.windows(2)
                .map(|w| ((w[1].1 / w[0].1).ln().abs(), (w[1].2 / w[0].2).ln().abs()))
                .collect()
        }
    };
    Ok(BivariateSample::new(pairs)?)
}

/// Reads `path`, or standard input when `path` is `-`.
pub fn ingest(path: &Path, transform: Transform) -> Result<BivariateSample> {
    if path == Path::new("-") {
        return ingest_reader(io::stdin().lock(), transform);
    }
    let file = File::open(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    ingest_reader(file, transform)
}

/// Writes `x,y` with a header. Values use the shortest representation that
/// parses back to the same `f64`.
pub fn write_sample<W: Write>(sample: &BivariateSample, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["x", "y"])?;
    for (x, y) in sample.pairs() {
        w.write_record([x.to_string(), y.to_string()])?;
    }
    w.flush().map_err(|e| CliError::Output(e.to_string()))
}
