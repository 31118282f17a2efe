use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the toolkit can report.
///
/// Variants are grouped by the CLI exit code they map to (see [`Error::exit_code`]).
#[derive(Debug, Error)]
pub enum Error {
    // validation (exit 2)
    #[error("domain error: {0}")]
    Domain(String),
    #[error("both depositions tilt toward the same side ({0}° and {1}°)")]
    SameSideDeposition(f64, f64),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("validation error: {0}")]
    Validation(String),
    #[error("config has no [{0}] section")]
    MissingSection(&'static str),
    #[error("trace has gaps at rows {rows:?} (expected spacing {tau0} s)")]
    Gap { rows: Vec<usize>, tau0: f64 },
    #[error("trace is empty")]
    EmptyTrace,
    #[error("trace too short: {len} samples, need at least {min}")]
    TraceTooShort { len: usize, min: usize },

    // computation (exit 3)
    #[error("T2E = {t2e} us exceeds 2*T1 = {two_t1} us")]
    UnphysicalDephasing { t2e: f64, two_t1: f64 },
    #[error("fit did not converge after {0} iterations")]
    NonConvergence(usize),
    #[error("signal range {range:.3e} is below the noise floor {noise:.3e}")]
    DegenerateData { range: f64, noise: f64 },
    #[error("no unambiguous oscillation frequency: {0}")]
    AmbiguousFrequency(String),
    #[error("median is zero, RCV undefined")]
    ZeroMedian,

    // i/o (exit 4)
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// 2 validation, 3 computation, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        use Error::*;
        match self {
            Domain(_)
            | SameSideDeposition(..)
            | Parse { .. }
            | Validation(_)
            | MissingSection(_)
            | Gap { .. }
            | EmptyTrace
            | TraceTooShort { .. } => 2,
            UnphysicalDephasing { .. }
            | NonConvergence(_)
            | DegenerateData { .. }
            | AmbiguousFrequency(_)
            | ZeroMedian => 3,
            Io { .. } | Csv(_) => 4,
        }
    }
}

pub(crate) fn ensure_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be positive and finite, got {v}")))
    }
}
