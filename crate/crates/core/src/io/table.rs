//! Flat result tables, written as CSV with 17 significant digits or as JSON.

use std::io::{Read, Write};
use std::path::Path;

use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::fit::{Diagnostics, FitResult, Model};
use crate::fluct::{AllanResult, PsdResult, ReferenceLines, TraceSummary};
use crate::geometry::{JunctionGeometry, RotatedJunction};
use crate::junction::JunctionElectrical;
use crate::transmon::TransmonParams;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Bool(bool),
    Text(String),
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            Cell::Num(x) => Some(x),
            Cell::Int(i) => Some(i as f64),
            _ => None,
        }
    }

    fn render(&self) -> String {
        match self {
            Cell::Num(x) if x.is_finite() => format!("{x:.16e}"),
            Cell::Num(x) if x.is_nan() => "nan".into(),
            Cell::Num(x) if *x > 0.0 => "inf".into(),
            Cell::Num(_) => "-inf".into(),
            Cell::Int(i) => i.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn parse(s: &str) -> Cell {
        if let Ok(i) = s.parse::<i64>() {
            return Cell::Int(i);
        }
        if let Ok(x) = s.parse::<f64>() {
            return Cell::Num(x);
        }
        match s {
            "true" => Cell::Bool(true),
            "false" => Cell::Bool(false),
            _ => Cell::Text(s.to_string()),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Num(x) => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
            Cell::Int(i) => Value::from(*i),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Text(s) => Value::String(s.clone()),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    /// One-row table from name/value pairs.
    pub fn record(fields: Vec<(&str, Cell)>) -> Self {
        let (columns, row): (Vec<_>, Vec<_>) =
            fields.into_iter().map(|(k, v)| (k.to_string(), v)).unzip();
        Self {
            columns,
            rows: vec![row],
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Appends the rows of a table with identical columns.
    pub fn extend(&mut self, other: Table) {
        if self.columns.is_empty() {
            self.columns = other.columns;
        }
        self.rows.extend(other.rows);
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| &r[i]).collect())
    }

    pub fn write_csv(&self, out: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))?;
        }
        w.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }

    pub fn read_csv(input: impl Read) -> Result<Self> {
        let mut r = csv::Reader::from_reader(input);
        let columns = r.headers()?.iter().map(str::to_string).collect();
        let mut rows = Vec::new();
        for rec in r.records() {
            rows.push(rec?.iter().map(Cell::parse).collect());
        }
        Ok(Self { columns, rows })
    }

    pub fn to_json(&self) -> Value {
        let objs: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let map: Map<String, Value> = self
                    .columns
                    .iter()
                    .cloned()
                    .zip(row.iter().map(Cell::to_json))
                    .collect();
                Value::Object(map)
            })
            .collect();
        if objs.len() == 1 {
            objs.into_iter().next().unwrap_or(Value::Null)
        } else {
            Value::Array(objs)
        }
    }

    pub fn write(&self, out: impl Write, format: Format) -> Result<()> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Json => {
                let mut out = out;
                let text = serde_json::to_string_pretty(&self.to_json())
                    .map_err(|e| Error::Validation(e.to_string()))?;
                writeln!(out, "{text}").map_err(|e| Error::io("<json>", e))
            }
        }
    }

    pub fn write_file(&self, path: &Path, format: Format) -> Result<()> {
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        self.write(std::io::BufWriter::new(file), format)
    }
}

pub fn geometry_table(g: &JunctionGeometry, rotated: Option<&RotatedJunction>) -> Table {
    let mut fields = vec![
        ("overlap_width_nm", g.overlap_width_nm.into()),
        ("overlap_length_nm", g.overlap_length_nm.into()),
        ("area_um2", g.area_um2.into()),
        ("formed", g.formed.into()),
    ];
    if let Some(r) = rotated {
        fields.push(("along_shift_1_nm", r.along_shift_nm[0].into()));
        fields.push(("along_shift_2_nm", r.along_shift_nm[1].into()));
    }
    Table::record(fields)
}

pub const JUNCTION_COLUMNS: &[&str] = &["rn_ohm", "area_um2", "delta_uev", "rna", "ic_na", "jc_acm2"];

pub fn junction_row(j: &JunctionElectrical) -> Vec<Cell> {
    vec![
        j.r_n_ohm.into(),
        j.area_um2.into(),
        j.delta_uev.into(),
        j.rna_ohm_um2.into(),
        j.ic_na.into(),
        j.jc_a_cm2.into(),
    ]
}

pub fn transmon_table(p: &TransmonParams) -> Table {
    let mut fields: Vec<(&str, Cell)> = vec![
        ("f_qubit_mhz", p.f_qubit_mhz.into()),
        ("alpha_mhz", p.alpha_mhz.into()),
        ("chi_khz", p.chi_khz.into()),
        ("kappa_khz", p.kappa_khz.into()),
        ("f_res_ghz", p.f_res_ghz.into()),
        ("nbar", p.nbar.into()),
        ("e_c_mhz", p.energies.e_c_mhz.into()),
        ("e_j_mhz", p.energies.e_j_mhz.into()),
        ("ej_ec_ratio", p.energies.ej_ec_ratio.into()),
        ("transmon_regime", p.energies.transmon_regime.into()),
        ("q_phi_photon", p.q_phi_photon.into()),
    ];
    if let Some(c) = &p.coherence {
        fields.extend([
            ("t1_us", c.t1_us.into()),
            ("t2e_us", c.t2e_us.into()),
            ("q1", c.q1.into()),
            ("q2e", c.q2e.into()),
            ("q_phi", c.q_phi.into()),
        ]);
    }
    Table::record(fields)
}

/// One row per fit; `T` is T1 or T2E, `Delta`/`phi` are NaN for the T1 model.
pub fn fit_table(label: &str, r: &FitResult, d: &Diagnostics) -> Table {
    let get = |n: &str| (r.value(n).unwrap_or(f64::NAN), r.stderr_of(n).unwrap_or(f64::NAN));
    let (a, a_err) = get("A");
    let (t, t_err) = match r.model {
        Model::T1 => get("T1"),
        Model::Echo => get("T2E"),
    };
    let (delta, delta_err) = get("Delta");
    let (phi, phi_err) = get("phi");
    let (c, c_err) = get("C");
    Table::record(vec![
        ("label", label.into()),
        ("model", r.model.name().into()),
        ("A", a.into()),
        ("A_stderr", a_err.into()),
        ("T_us", t.into()),
        ("T_stderr", t_err.into()),
        ("Delta_mhz", delta.into()),
        ("Delta_stderr", delta_err.into()),
        ("phi", phi.into()),
        ("phi_stderr", phi_err.into()),
        ("C", c.into()),
        ("C_stderr", c_err.into()),
        ("residual_rms", r.residual_rms.into()),
        ("converged", r.converged.into()),
        ("iterations", r.iterations.into()),
        ("lag1_autocorr", d.lag1_autocorr.into()),
        ("reduced_chi2", d.reduced_chi2.unwrap_or(f64::NAN).into()),
        ("diagnostics_pass", d.pass.into()),
    ])
}

pub fn allan_table(label: &str, a: &AllanResult, lines: Option<&ReferenceLines>) -> Table {
    let mut t = Table::new(&["label", "m", "tau_s", "adev_us", "count", "white_adev_us"]);
    for i in 0..a.taus.len() {
        let white = lines.map_or(f64::NAN, |l| l.white_adev_at(a.taus[i]));
        t.push(vec![
            label.into(),
            a.factors[i].into(),
            a.taus[i].into(),
            a.adev[i].into(),
            a.counts[i].into(),
            white.into(),
        ]);
    }
    t
}

pub fn psd_table(label: &str, p: &PsdResult, lines: Option<&ReferenceLines>) -> Table {
    let mut t = Table::new(&["label", "freq_hz", "psd_us2_per_hz", "one_over_f", "white"]);
    for i in 0..p.freqs.len() {
        let (f, w) = lines.map_or((f64::NAN, f64::NAN), |l| (l.one_over_f[i], l.white_psd[i]));
        t.push(vec![label.into(), p.freqs[i].into(), p.psd[i].into(), f.into(), w.into()]);
    }
    t
}

pub fn summary_table(label: &str, s: &TraceSummary, segments: usize) -> Table {
    Table::record(vec![
        ("label", label.into()),
        ("count", s.count.into()),
        ("mean", s.mean.into()),
        ("stddev", s.stddev.into()),
        ("median", s.median.into()),
        ("q1", s.q1.into()),
        ("q3", s.q3.into()),
        ("iqr", s.iqr.into()),
        ("rcv", s.rcv.into()),
        ("psd_segments", segments.into()),
    ])
}

pub fn histogram_table(label: &str, s: &TraceSummary) -> Table {
    let mut t = Table::new(&["label", "bin_lo", "bin_hi", "count", "gaussian"]);
    let overlay = s.gaussian_overlay();
    for (i, c) in s.histogram.counts.iter().enumerate() {
        t.push(vec![
            label.into(),
            s.histogram.edges[i].into(),
            s.histogram.edges[i + 1].into(),
            (*c).into(),
            overlay[i].into(),
        ]);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip_is_exact() {
        let mut t = Table::new(&["label", "x", "n", "ok"]);
        t.push(vec!["a".into(), (0.1 + 0.2).into(), 3usize.into(), true.into()]);
        t.push(vec!["b".into(), std::f64::consts::PI.into(), 0usize.into(), false.into()]);
        t.push(vec!["c".into(), f64::INFINITY.into(), 1usize.into(), false.into()]);
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.contains("3.0000000000000004e-1"), "{text}");
        assert_eq!(Table::read_csv(buf.as_slice()).unwrap(), t);
    }

    #[test]
    fn json_record() {
        let t = Table::record(vec![("a", 1.5.into()), ("b", false.into())]);
        assert_eq!(t.to_json(), serde_json::json!({"a": 1.5, "b": false}));
    }
}
