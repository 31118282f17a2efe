//! Command-line front end. Exit codes: 0 success, 2 validation, 3 computation, 4 I/O.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::fit::{self, Model};
use crate::fluct;
use crate::geometry::{coverage, overlap_vs_rotation};
use crate::io::ingest::{ingest_trace, read_curve, DEFAULT_VALUE_COLUMN};
use crate::io::svg::fluctuation_svg;
use crate::io::table::{self, Cell, Format, Table, JUNCTION_COLUMNS};
use crate::io::{load_config, run_pipeline, DeviceConfig, FluctSettings, PipelineInputs};
use crate::junction::{critical_current_density, JunctionElectrical};
use crate::transmon::RateConvention;
use crate::units::DEFAULT_GAP_UEV;

pub const CONFIG_ENV: &str = "TRENCHJJ_CONFIG";

#[derive(Debug, Parser)]
#[command(name = "trenchjj", version, about = "Trench junction and transmon characterization")]
pub struct Cli {
    /// Device config (TOML, or JSON by extension).
    #[arg(long, global = true, env = CONFIG_ENV)]
    config: Option<PathBuf>,
    /// Output directory; single-record commands print to stdout without it.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct FluctArgs {
    /// Value column of the trace CSV.
    #[arg(long, default_value = DEFAULT_VALUE_COLUMN)]
    column: String,
    #[arg(long, default_value_t = fluct::DEFAULT_SEGMENT_LEN)]
    segment_len: usize,
    /// White-noise reference level, µs²/Hz.
    #[arg(long, default_value_t = fluct::DEFAULT_WHITE_LEVEL)]
    aw: f64,
    #[arg(long, default_value_t = 30)]
    bins: usize,
    /// Also write a three-panel SVG per trace.
    #[arg(long)]
    svg: bool,
}

impl FluctArgs {
    fn settings(&self) -> FluctSettings {
        FluctSettings {
            segment_len: self.segment_len,
            white_level: self.aw,
            bins: self.bins,
            svg: self.svg,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Junction overlap from the [trench] and [[deposition]] sections.
    Geometry {
        /// Extra in-plane chip rotation, degrees.
        #[arg(long, allow_negative_numbers = true)]
        rotation: Option<f64>,
    },
    /// Critical current and current density.
    Junction {
        #[arg(long)]
        rn: Option<f64>,
        #[arg(long)]
        area: Option<f64>,
        #[arg(long)]
        rna: Option<f64>,
        /// Superconducting gap, µeV.
        #[arg(long)]
        delta: Option<f64>,
        /// CSV with rn_ohm,area_um2 columns; rna, ic_na, jc_acm2 are appended.
        #[arg(long)]
        batch: Option<PathBuf>,
    },
    /// Transmon energies and quality factors from the [transmon] section.
    Transmon {
        #[arg(long)]
        nbar: Option<f64>,
        /// Treat κ and χ as angular rates in the dephasing bound.
        #[arg(long)]
        strict_angular: bool,
    },
    /// Fit a decay curve (delay_us,signal[,sigma]).
    Fit {
        #[arg(long, value_enum)]
        model: Model,
        #[arg(long)]
        input: PathBuf,
    },
    /// Allan deviation, Welch PSD and summary of a trace (timestamp_s,value_us).
    Fluct {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        opts: FluctArgs,
    },
    /// Run every configured stage into --out.
    Pipeline {
        #[arg(long)]
        trace: Vec<PathBuf>,
        #[arg(long)]
        t1_curve: Vec<PathBuf>,
        #[arg(long)]
        echo_curve: Vec<PathBuf>,
        #[command(flatten)]
        opts: FluctArgs,
    },
}

fn config(cli: &Cli) -> Result<DeviceConfig> {
    match &cli.config {
        Some(p) => load_config(p),
        None => Err(Error::Validation(format!(
            "no config given (use --config or {CONFIG_ENV})"
        ))),
    }
}

fn emit(cli: &Cli, name: &str, t: &Table, default: Format) -> Result<()> {
    let format = cli.format.unwrap_or(default);
    match &cli.out {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
            let ext = if format == Format::Json { "json" } else { "csv" };
            t.write_file(&dir.join(format!("{name}.{ext}")), format)
        }
        None => {
            let stdout = std::io::stdout();
            t.write(stdout.lock(), format)
        }
    }
}

fn junction_batch(path: &Path, delta: f64) -> Result<Table> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut t = Table::read_csv(file)?;
    let idx = |name: &str| {
        t.columns
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| Error::Validation(format!("batch file lacks `{name}`")))
    };
    let (rn_i, area_i) = (idx("rn_ohm")?, idx("area_um2")?);
    let mut rows = Vec::with_capacity(t.rows.len());
    for (line, row) in t.rows.iter().enumerate() {
        let num = |i: usize| {
            row[i].as_f64().ok_or_else(|| Error::Parse {
                line: line + 2,
                column: i + 1,
                message: "expected a number".into(),
            })
        };
        let j = JunctionElectrical::from_measurement(num(rn_i)?, num(area_i)?, delta)?;
        let mut row = row.clone();
        row.extend([j.rna_ohm_um2.into(), j.ic_na.into(), j.jc_a_cm2.into()]);
        rows.push(row);
    }
    t.columns.extend(["rna", "ic_na", "jc_acm2"].map(String::from));
    t.rows = rows;
    Ok(t)
}

fn fluct_outputs(dir: &Path, trace: &fluct::TimeTrace, s: &FluctSettings) -> Result<()> {
    let allan = fluct::overlapping_allan(trace)?;
    let psd = fluct::welch_psd(trace, s.segment_len)?;
    let lines = fluct::reference_lines(&psd, s.white_level);
    let summary = fluct::summarize(trace, s.bins)?;
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let label = &trace.label;
    table::allan_table(label, &allan, lines.as_ref()).write_file(&dir.join("allan.csv"), Format::Csv)?;
    table::psd_table(label, &psd, lines.as_ref()).write_file(&dir.join("psd.csv"), Format::Csv)?;
    table::summary_table(label, &summary, psd.segment_count)
        .write_file(&dir.join("summary.csv"), Format::Csv)?;
    table::histogram_table(label, &summary).write_file(&dir.join("histogram.csv"), Format::Csv)?;
    let peaks = fluct::allan_peaks(&allan, s.white_level);
    let mut peak_table = Table::new(&["tau_s", "adev_us", "excess"]);
    for p in peaks {
        peak_table.push(vec![p.tau.into(), p.adev.into(), p.excess.into()]);
    }
    peak_table.write_file(&dir.join("allan_peaks.csv"), Format::Csv)?;
    if s.svg {
        let path = dir.join(format!("fluct_{label}.svg"));
        let body = fluctuation_svg(label, &summary, &allan, &psd, lines.as_ref());
        std::fs::write(&path, body).map_err(|e| Error::io(path, e))?;
    }
    Ok(())
}

fn execute(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Geometry { rotation } => {
            let cfg = config(cli)?;
            let trench = cfg.trench()?;
            let (a, b) = cfg.deposition_pair()?;
            let r = overlap_vs_rotation(trench, a, b, rotation.unwrap_or(0.0))?;
            let mut t = table::geometry_table(&r.geometry, rotation.is_some().then_some(&r));
            let cols = [
                ("thickness_1_nm", a.effective_thickness_nm()),
                ("thickness_2_nm", b.effective_thickness_nm()),
            ];
            for (name, v) in cols {
                t.columns.push(name.into());
                t.rows[0].push(v.into());
            }
            let c1 = coverage(trench, a);
            let covered = c1.segments.iter().filter(|s| s.is_some()).count();
            t.columns.push("segments_covered_1".into());
            t.rows[0].push(covered.into());
            emit(cli, "geometry", &t, Format::Csv)
        }
        Command::Junction {
            rn,
            area,
            rna,
            delta,
            batch,
        } => {
            let section = match &cli.config {
                Some(p) => load_config(p)?.junction.unwrap_or_default(),
                None => Default::default(),
            };
            let delta = delta.unwrap_or(if cli.config.is_some() {
                section.delta_uev
            } else {
                DEFAULT_GAP_UEV
            });
            if let Some(path) = batch {
                let t = junction_batch(path, delta)?;
                return emit(cli, "junction_batch", &t, Format::Csv);
            }
            // flags on the command line win over the config section
            let (rn, area, rna) = if rna.is_some() && rn.is_none() {
                (None, None, *rna)
            } else {
                (rn.or(section.rn_ohm), area.or(section.area_um2), rna.or(section.rna_ohm_um2))
            };
            let mut t = Table::new(JUNCTION_COLUMNS);
            match (rn, area, rna) {
                (Some(rn), Some(area), _) => {
                    t.push(table::junction_row(&JunctionElectrical::from_measurement(rn, area, delta)?))
                }
                (_, _, Some(rna)) => {
                    let nan = Cell::Num(f64::NAN);
                    let jc = critical_current_density(rna, delta)?;
                    t.push(vec![nan.clone(), nan.clone(), delta.into(), rna.into(), nan, jc.into()]);
                }
                _ => {
                    return Err(Error::Validation(
                        "give --rn with --area, or --rna (or a config [junction] section)".into(),
                    ))
                }
            }
            emit(cli, "junction", &t, Format::Csv)
        }
        Command::Transmon {
            nbar,
            strict_angular,
        } => {
            let cfg = config(cli)?;
            let mut section = *cfg.transmon()?;
            if let Some(n) = nbar {
                section.nbar = *n;
            }
            if *strict_angular {
                section.rate_convention = RateConvention::StrictAngular;
            }
            let p = section.derive()?;
            emit(cli, "transmon", &table::transmon_table(&p), Format::Json)
        }
        Command::Fit { model, input } => {
            let curve = read_curve(input)?;
            let r = fit::fit(&curve, *model)?;
            let d = fit::residual_diagnostics(&curve, &r);
            for w in &r.warnings {
                eprintln!("warning: {w}");
            }
            let label = input.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            emit(cli, "fit", &table::fit_table(&label, &r, &d), Format::Json)
        }
        Command::Fluct { input, opts } => {
            let trace = ingest_trace(input, &opts.column)?;
            let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("."));
            fluct_outputs(&dir, &trace, &opts.settings())
        }
        Command::Pipeline {
            trace,
            t1_curve,
            echo_curve,
            opts,
        } => {
            let cfg = match &cli.config {
                Some(p) => load_config(p)?,
                None => DeviceConfig::default(),
            };
            let curves = t1_curve
                .iter()
                .map(|p| (Model::T1, p.clone()))
                .chain(echo_curve.iter().map(|p| (Model::Echo, p.clone())))
                .collect();
            let inputs = PipelineInputs {
                config_path: cli.config.clone(),
                curves,
                traces: trace.clone(),
                value_column: opts.column.clone(),
                fluct: opts.settings(),
            };
            let out = cli.out.clone().unwrap_or_else(|| PathBuf::from("out"));
            match run_pipeline(&cfg, &inputs, &out) {
                Ok(_) => Ok(()),
                Err(f) => {
                    eprintln!("stage {} failed", f.stage);
                    Err(f.error)
                }
            }
        }
    }
}

/// Parses `args` and runs the command; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(std::io::stderr(), "error: {e}");
            e.exit_code()
        }
    }
}
