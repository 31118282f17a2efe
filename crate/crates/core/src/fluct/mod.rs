//! Fluctuation statistics of coherence-time trajectories.

mod allan;
mod reference;
mod summary;
mod welch;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_positive, Error, Result};

pub use allan::{allan_peaks, overlapping_allan, tau_grid, AllanPeak, AllanResult};
pub use reference::{reference_lines, ReferenceLines, DEFAULT_WHITE_LEVEL};
pub use summary::{gaussian_rcv_bound, quantile, summarize, summarize_values, Histogram, TraceSummary};
pub use welch::{welch_psd, PsdResult, DEFAULT_SEGMENT_LEN};

/// Minimum number of samples accepted in a trace.
pub const MIN_TRACE_LEN: usize = 16;

/// Uniformly sampled series of T1 or T2E values (µs) taken every `tau0_s` seconds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeTrace {
    tau0_s: f64,
    values: Vec<f64>,
    pub label: String,
}

impl TimeTrace {
    pub fn new(tau0_s: f64, values: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        ensure_positive("sampling interval", tau0_s)?;
        if values.is_empty() {
            return Err(Error::EmptyTrace);
        }
        if values.len() < MIN_TRACE_LEN {
            return Err(Error::TraceTooShort {
                len: values.len(),
                min: MIN_TRACE_LEN,
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Validation("trace contains non-finite values".into()));
        }
        Ok(Self {
            tau0_s,
            values,
            label: label.into(),
        })
    }

    pub fn tau0_s(&self) -> f64 {
        self.tau0_s
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn duration_s(&self) -> f64 {
        self.tau0_s * self.values.len() as f64
    }

    /// Same trace with every value mapped through `f`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            tau0_s: self.tau0_s,
            values: self.values.iter().map(|&v| f(v)).collect(),
            label: self.label.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trace_invariants() {
        assert!(matches!(TimeTrace::new(30.0, vec![], ""), Err(Error::EmptyTrace)));
        assert!(matches!(
            TimeTrace::new(30.0, vec![1.0; 15], ""),
            Err(Error::TraceTooShort { len: 15, .. })
        ));
        assert!(TimeTrace::new(0.0, vec![1.0; 16], "").is_err());
        assert!(TimeTrace::new(30.0, vec![f64::NAN; 16], "").is_err());
        let t = TimeTrace::new(30.0, vec![1.0; 4320], "q20").unwrap();
        assert_eq!(t.duration_s(), 36.0 * 3600.0);
    }
}
