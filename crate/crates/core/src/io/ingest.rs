//! CSV ingestion of coherence traces and decay curves.

use std::io::Read;
use std::path::Path;

use crate::error::{Error, Result};
use crate::fit::DecayCurve;
use crate::fluct::{TimeTrace, MIN_TRACE_LEN};

pub const TIMESTAMP_COLUMN: &str = "timestamp_s";
pub const DEFAULT_VALUE_COLUMN: &str = "value_us";
/// Relative deviation from the median spacing that counts as a gap.
pub const GAP_TOLERANCE: f64 = 0.5;

fn open(path: &Path) -> Result<std::fs::File> {
    std::fs::File::open(path).map_err(|e| Error::io(path, e))
}

fn column_index(headers: &csv::StringRecord, name: &str) -> Result<usize> {
    headers
        .iter()
        .position(|h| h.trim() == name)
        .ok_or_else(|| Error::Validation(format!("missing column `{name}`")))
}

fn parse_cell(record: &csv::StringRecord, idx: usize, row: usize) -> Result<f64> {
    let cell = record.get(idx).unwrap_or("").trim();
    cell.parse().map_err(|_| Error::Parse {
        line: row,
        column: idx + 1,
        message: format!("`{cell}` is not a number"),
    })
}

fn csv_error(e: csv::Error) -> Error {
    match e.position() {
        Some(p) => Error::Parse {
            line: p.line() as usize,
            column: 0,
            message: e.to_string(),
        },
        None => Error::Csv(e),
    }
}

/// Load column `column` of a `timestamp_s,...` CSV as a uniform trace.
pub fn ingest_trace(path: impl AsRef<Path>, column: &str) -> Result<TimeTrace> {
    let path = path.as_ref();
    let label = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    read_trace(open(path)?, column, label)
}

pub fn read_trace(reader: impl Read, column: &str, label: impl Into<String>) -> Result<TimeTrace> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers().map_err(csv_error)?.clone();
    let ts_idx = column_index(&headers, TIMESTAMP_COLUMN)?;
    let val_idx = column_index(&headers, column)?;
    let mut stamps = Vec::new();
    let mut values = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(csv_error)?;
        // header is line 1
        stamps.push(parse_cell(&rec, ts_idx, i + 2)?);
        values.push(parse_cell(&rec, val_idx, i + 2)?);
    }
    if values.is_empty() {
        return Err(Error::EmptyTrace);
    }
    if values.len() < 2 {
        return Err(Error::TraceTooShort {
            len: values.len(),
            min: MIN_TRACE_LEN,
        });
    }
    let mut diffs: Vec<f64> = stamps.windows(2).map(|w| w[1] - w[0]).collect();
    let mut sorted = diffs.clone();
    sorted.sort_by(f64::total_cmp);
    let tau0 = if sorted.len().is_multiple_of(2) {
        0.5 * (sorted[sorted.len() / 2 - 1] + sorted[sorted.len() / 2])
    } else {
        sorted[sorted.len() / 2]
    };
    if tau0.is_nan() || tau0 <= 0.0 {
        return Err(Error::Validation(format!(
            "timestamps are not increasing (median spacing {tau0})"
        )));
    }
    // data row index of the sample that follows each bad spacing
    let rows: Vec<usize> = diffs
        .drain(..)
        .enumerate()
        .filter(|(_, d)| ((d - tau0) / tau0).abs() > GAP_TOLERANCE)
        .map(|(i, _)| i + 1)
        .collect();
    if !rows.is_empty() {
        return Err(Error::Gap { rows, tau0 });
    }
    TimeTrace::new(tau0, values, label)
}

/// Load a `delay_us,signal[,sigma]` CSV.
pub fn read_curve(path: impl AsRef<Path>) -> Result<DecayCurve> {
    read_curve_from(open(path.as_ref())?)
}

pub fn read_curve_from(reader: impl Read) -> Result<DecayCurve> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers().map_err(csv_error)?.clone();
    let d_idx = column_index(&headers, "delay_us")?;
    let s_idx = column_index(&headers, "signal")?;
    let sig_idx = headers.iter().position(|h| h == "sigma");
    let (mut delays, mut signals, mut sigmas) = (Vec::new(), Vec::new(), Vec::new());
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(csv_error)?;
        delays.push(parse_cell(&rec, d_idx, i + 2)?);
        signals.push(parse_cell(&rec, s_idx, i + 2)?);
        if let Some(j) = sig_idx {
            sigmas.push(parse_cell(&rec, j, i + 2)?);
        }
    }
    match sig_idx {
        Some(_) => DecayCurve::with_sigmas(delays, signals, sigmas),
        None => DecayCurve::new(delays, signals),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn csv_text(stamps: impl Iterator<Item = f64>) -> String {
        let mut s = String::from("timestamp_s,value_us,stderr_us\n");
        for (i, t) in stamps.enumerate() {
            s.push_str(&format!("{t},{},{}\n", 140.0 + (i % 7) as f64, 1.0));
        }
        s
    }

    #[test]
    fn uniform_trace() {
        let text = csv_text((0..4320).map(|i| 30.0 * i as f64));
        let t = read_trace(text.as_bytes(), DEFAULT_VALUE_COLUMN, "q").unwrap();
        assert_eq!(t.tau0_s(), 30.0);
        assert_eq!(t.len(), 4320);
    }

    #[test]
    fn single_row_and_empty() {
        let text = csv_text(std::iter::once(0.0));
        assert!(matches!(
            read_trace(text.as_bytes(), DEFAULT_VALUE_COLUMN, ""),
            Err(Error::TraceTooShort { len: 1, .. })
        ));
        let text = "timestamp_s,value_us\n";
        assert!(matches!(
            read_trace(text.as_bytes(), DEFAULT_VALUE_COLUMN, ""),
            Err(Error::EmptyTrace)
        ));
    }

    #[test]
    fn ten_minute_gap_is_reported() {
        let stamps = (0..100).map(|i| 30.0 * i as f64 + if i >= 40 { 600.0 } else { 0.0 });
        let text = csv_text(stamps);
        match read_trace(text.as_bytes(), DEFAULT_VALUE_COLUMN, "") {
            Err(Error::Gap { rows, tau0 }) => {
                assert_eq!(rows, vec![40]);
                assert_eq!(tau0, 30.0);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bad_cells() {
        let text = "timestamp_s,value_us\n0,1\n30,abc\n";
        assert!(matches!(
            read_trace(text.as_bytes(), DEFAULT_VALUE_COLUMN, ""),
            Err(Error::Parse { line: 3, column: 2, .. })
        ));
        let text = "time,value_us\n0,1\n";
        assert!(matches!(
            read_trace(text.as_bytes(), DEFAULT_VALUE_COLUMN, ""),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn curve_with_sigma() {
        let text = "delay_us,signal,sigma\n0,1.0,0.01\n10,0.9,0.01\n";
        let c = read_curve_from(text.as_bytes()).unwrap();
        assert_eq!(c.sigmas().unwrap(), &[0.01, 0.01]);
        let c = read_curve_from("delay_us,signal\n0,1\n1,2\n".as_bytes()).unwrap();
        assert!(c.sigmas().is_none());
    }
}
