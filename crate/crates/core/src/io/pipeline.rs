//! Batch run of every configured stage into one output directory.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use super::config::DeviceConfig;
use super::ingest::{ingest_trace, read_curve, DEFAULT_VALUE_COLUMN};
use super::svg::fluctuation_svg;
use super::table::{self, Format, Table, JUNCTION_COLUMNS};
use crate::error::{Error, Result};
use crate::fit::{self, Model};
use crate::fluct::{self, TimeTrace, DEFAULT_SEGMENT_LEN, DEFAULT_WHITE_LEVEL};
use crate::geometry::junction_geometry;
use crate::junction::{critical_current_density, JunctionElectrical};

pub const MANIFEST: &str = "MANIFEST";
pub const REPORT: &str = "report.json";

#[derive(Debug, Clone, PartialEq)]
pub struct FluctSettings {
    pub segment_len: usize,
    pub white_level: f64,
    pub bins: usize,
    pub svg: bool,
}

impl Default for FluctSettings {
    fn default() -> Self {
        Self {
            segment_len: DEFAULT_SEGMENT_LEN,
            white_level: DEFAULT_WHITE_LEVEL,
            bins: 30,
            svg: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineInputs {
    /// Only used for the input digest.
    pub config_path: Option<PathBuf>,
    pub curves: Vec<(Model, PathBuf)>,
    pub traces: Vec<PathBuf>,
    pub value_column: String,
    pub fluct: FluctSettings,
}

impl Default for PipelineInputs {
    fn default() -> Self {
        Self {
            config_path: None,
            curves: Vec::new(),
            traces: Vec::new(),
            value_column: DEFAULT_VALUE_COLUMN.to_string(),
            fluct: FluctSettings::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StageStatus {
    Ok,
    Failed,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageRecord {
    pub name: &'static str,
    pub status: StageStatus,
    pub files: Vec<String>,
    pub elapsed_ms: f64,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub tool_version: &'static str,
    pub input_digests: BTreeMap<String, String>,
    pub stages: Vec<StageRecord>,
    pub results: BTreeMap<&'static str, Value>,
}

impl RunReport {
    pub fn complete(&self) -> bool {
        self.stages.iter().all(|s| s.status == StageStatus::Ok)
    }

    pub fn stage(&self, name: &str) -> Option<&StageRecord> {
        self.stages.iter().find(|s| s.name == name)
    }
}

#[derive(Debug)]
pub struct PipelineFailure {
    pub stage: &'static str,
    pub error: Error,
    pub report: RunReport,
}

impl std::fmt::Display for PipelineFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "stage `{}` failed: {}", self.stage, self.error)
    }
}

impl std::error::Error for PipelineFailure {}

fn sha256_file(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

struct StageOutput {
    tables: Vec<(&'static str, Table)>,
    extra: Vec<(String, String)>,
    summary: Value,
}

type Stage<'a> = (&'static str, Box<dyn Fn() -> Result<StageOutput> + 'a>);

fn geometry_stage(config: &DeviceConfig) -> Result<StageOutput> {
    let (a, b) = config.deposition_pair()?;
    let g = junction_geometry(config.trench()?, a, b)?;
    let t = table::geometry_table(&g, None);
    Ok(StageOutput {
        summary: t.to_json(),
        tables: vec![("geometry.csv", t)],
        extra: Vec::new(),
    })
}

fn junction_stage(config: &DeviceConfig) -> Result<StageOutput> {
    let j = config.junction()?;
    let mut t = Table::new(JUNCTION_COLUMNS);
    match (j.rn_ohm, j.area_um2, j.rna_ohm_um2) {
        (Some(rn), Some(area), _) => {
            t.push(table::junction_row(&JunctionElectrical::from_measurement(rn, area, j.delta_uev)?))
        }
        (_, _, Some(rna)) => {
            let jc = critical_current_density(rna, j.delta_uev)?;
            t.push(vec![
                f64::NAN.into(),
                f64::NAN.into(),
                j.delta_uev.into(),
                rna.into(),
                f64::NAN.into(),
                jc.into(),
            ]);
        }
        _ => {
            return Err(Error::Validation(
                "junction section needs rn_ohm with area_um2, or rna_ohm_um2".into(),
            ))
        }
    }
    Ok(StageOutput {
        summary: t.to_json(),
        tables: vec![("junction.csv", t)],
        extra: Vec::new(),
    })
}

fn transmon_stage(config: &DeviceConfig) -> Result<StageOutput> {
    let p = config.transmon()?.derive()?;
    let t = table::transmon_table(&p);
    Ok(StageOutput {
        summary: t.to_json(),
        tables: vec![("transmon.csv", t)],
        extra: Vec::new(),
    })
}

fn fit_stage(curves: &[(Model, PathBuf)]) -> Result<StageOutput> {
    let mut all = Table::default();
    for (model, path) in curves {
        let curve = read_curve(path)?;
        let r = fit::fit(&curve, *model)?;
        let d = fit::residual_diagnostics(&curve, &r);
        let label = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        all.extend(table::fit_table(&label, &r, &d));
    }
    Ok(StageOutput {
        summary: all.to_json(),
        tables: vec![("fit.csv", all)],
        extra: Vec::new(),
    })
}

struct TraceAnalysis {
    label: String,
    allan: fluct::AllanResult,
    psd: fluct::PsdResult,
    lines: Option<fluct::ReferenceLines>,
    summary: fluct::TraceSummary,
}

fn analyze(trace: &TimeTrace, s: &FluctSettings) -> Result<TraceAnalysis> {
    let allan = fluct::overlapping_allan(trace)?;
    let psd = fluct::welch_psd(trace, s.segment_len)?;
    let lines = fluct::reference_lines(&psd, s.white_level);
    let summary = fluct::summarize(trace, s.bins)?;
    Ok(TraceAnalysis {
        label: trace.label.clone(),
        allan,
        psd,
        lines,
        summary,
    })
}

fn fluct_stage(paths: &[PathBuf], column: &str, settings: &FluctSettings) -> Result<StageOutput> {
    let traces = paths
        .iter()
        .map(|p| ingest_trace(p, column))
        .collect::<Result<Vec<_>>>()?;
    // traces are independent; results are gathered in input order
    let analyses: Vec<Result<TraceAnalysis>> = std::thread::scope(|scope| {
        let handles: Vec<_> = traces
            .iter()
            .map(|t| scope.spawn(move || analyze(t, settings)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| Err(Error::domain("analysis thread panicked"))))
            .collect()
    });
    let (mut allan, mut psd, mut summary, mut hist) =
        (Table::default(), Table::default(), Table::default(), Table::default());
    let mut extra = Vec::new();
    let mut json = Vec::new();
    for a in analyses {
        let a = a?;
        allan.extend(table::allan_table(&a.label, &a.allan, a.lines.as_ref()));
        psd.extend(table::psd_table(&a.label, &a.psd, a.lines.as_ref()));
        let s = table::summary_table(&a.label, &a.summary, a.psd.segment_count);
        json.push(s.to_json());
        summary.extend(s);
        hist.extend(table::histogram_table(&a.label, &a.summary));
        if settings.svg {
            extra.push((
                format!("fluct_{}.svg", a.label),
                fluctuation_svg(&a.label, &a.summary, &a.allan, &a.psd, a.lines.as_ref()),
            ));
        }
    }
    Ok(StageOutput {
        tables: vec![
            ("allan.csv", allan),
            ("psd.csv", psd),
            ("summary.csv", summary),
            ("histogram.csv", hist),
        ],
        extra,
        summary: Value::Array(json),
    })
}

fn write_manifest(out_dir: &Path, report: &RunReport) -> Result<()> {
    let mut text = String::new();
    let _ = writeln!(text, "trenchjj {}", report.tool_version);
    let _ = writeln!(
        text,
        "status {}",
        if report.complete() { "complete" } else { "incomplete" }
    );
    for s in &report.stages {
        let status = match s.status {
            StageStatus::Ok => "ok",
            StageStatus::Failed => "failed",
            StageStatus::Skipped => "skipped",
        };
        let _ = write!(text, "{} {}", s.name, status);
        for f in &s.files {
            let _ = write!(text, " {f}");
        }
        if let Some(e) = &s.error {
            let _ = write!(text, " # {e}");
        }
        text.push('\n');
    }
    let path = out_dir.join(MANIFEST);
    std::fs::write(&path, text).map_err(|e| Error::io(path, e))?;
    let path = out_dir.join(REPORT);
    let json = serde_json::to_string_pretty(report).map_err(|e| Error::Validation(e.to_string()))?;
    std::fs::write(&path, json).map_err(|e| Error::io(path, e))
}

/// Runs geometry, junction, transmon, fit and fluctuation stages in that
/// order, skipping those without inputs. Stops at the first failing stage;
/// files already written stay in place and the MANIFEST says `incomplete`.
#[allow(clippy::result_large_err)]
pub fn run_pipeline(
    config: &DeviceConfig,
    inputs: &PipelineInputs,
    out_dir: &Path,
) -> std::result::Result<RunReport, PipelineFailure> {
    let mut report = RunReport {
        tool_version: env!("CARGO_PKG_VERSION"),
        input_digests: BTreeMap::new(),
        stages: Vec::new(),
        results: BTreeMap::new(),
    };
    let fail = |stage, error, report: RunReport| PipelineFailure { stage, error, report };

    if let Err(e) = std::fs::create_dir_all(out_dir) {
        return Err(fail("setup", Error::io(out_dir, e), report));
    }
    let digest_paths = inputs
        .config_path
        .iter()
        .chain(inputs.curves.iter().map(|(_, p)| p))
        .chain(&inputs.traces);
    for p in digest_paths {
        // unreadable inputs are reported by the stage that needs them
        if let Ok(d) = sha256_file(p) {
            report.input_digests.insert(p.display().to_string(), d);
        }
    }

    let mut stages: Vec<Stage> = Vec::new();
    if config.trench.is_some() || !config.deposition.is_empty() {
        stages.push(("geometry", Box::new(|| geometry_stage(config))));
    }
    if config.junction.is_some() {
        stages.push(("junction", Box::new(|| junction_stage(config))));
    }
    if config.transmon.is_some() {
        stages.push(("transmon", Box::new(|| transmon_stage(config))));
    }
    if !inputs.curves.is_empty() {
        stages.push(("fit", Box::new(|| fit_stage(&inputs.curves))));
    }
    if !inputs.traces.is_empty() {
        stages.push((
            "fluct",
            Box::new(|| fluct_stage(&inputs.traces, &inputs.value_column, &inputs.fluct)),
        ));
    }

    let mut failure: Option<(&'static str, Error)> = None;
    for (name, run) in stages {
        if failure.is_some() {
            report.stages.push(StageRecord {
                name,
                status: StageStatus::Skipped,
                files: Vec::new(),
                elapsed_ms: 0.0,
                error: None,
            });
            continue;
        }
        let start = Instant::now();
        let outcome = run().and_then(|out| {
            let mut files = Vec::new();
            for (file, t) in &out.tables {
                t.write_file(&out_dir.join(file), Format::Csv)?;
                files.push(file.to_string());
            }
            for (file, body) in &out.extra {
                let path = out_dir.join(file);
                std::fs::write(&path, body).map_err(|e| Error::io(path, e))?;
                files.push(file.clone());
            }
            Ok((files, out.summary))
        });
        let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
        match outcome {
            Ok((files, summary)) => {
                report.results.insert(name, summary);
                report.stages.push(StageRecord {
                    name,
                    status: StageStatus::Ok,
                    files,
                    elapsed_ms,
                    error: None,
                });
            }
            Err(e) => {
                report.stages.push(StageRecord {
                    name,
                    status: StageStatus::Failed,
                    files: Vec::new(),
                    elapsed_ms,
                    error: Some(e.to_string()),
                });
                failure = Some((name, e));
            }
        }
    }

    if let Err(e) = write_manifest(out_dir, &report) {
        return Err(fail("manifest", e, report));
    }
    match failure {
        Some((stage, error)) => Err(fail(stage, error, report)),
        None => Ok(report),
    }
}
