use serde::{Deserialize, Serialize};

use super::TimeTrace;
use crate::error::{Error, Result};
use crate::units::GAUSSIAN_IQR_PER_SIGMA;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    /// `counts.len() + 1` bin edges.
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
}

impl Histogram {
    fn build(values: &[f64], bins: usize) -> Self {
        let bins = bins.max(1);
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let (lo, hi) = if hi > lo { (lo, hi) } else { (lo - 0.5, hi + 0.5) };
        let width = (hi - lo) / bins as f64;
        let edges = (0..=bins).map(|i| lo + width * i as f64).collect();
        let mut counts = vec![0; bins];
        for &v in values {
            let i = (((v - lo) / width) as usize).min(bins - 1);
            counts[i] += 1;
        }
        Self { edges, counts }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceSummary {
    pub count: usize,
    pub mean: f64,
    /// Sample standard deviation (n − 1).
    pub stddev: f64,
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
    pub iqr: f64,
    /// IQR / median.
    pub rcv: f64,
    pub histogram: Histogram,
}

impl TraceSummary {
    /// Normal density scaled to the histogram, evaluated at the bin centres.
    pub fn gaussian_overlay(&self) -> Vec<f64> {
        let h = &self.histogram;
        let width = h.edges[1] - h.edges[0];
        let norm = self.count as f64 * width / (self.stddev * (2.0 * std::f64::consts::PI).sqrt());
        h.edges
            .windows(2)
            .map(|e| {
                let x = 0.5 * (e[0] + e[1]);
                norm * (-0.5 * ((x - self.mean) / self.stddev).powi(2)).exp()
            })
            .collect()
    }
}

/// Quantile by linear interpolation between order statistics
/// (h = (n−1)p on the sorted data).
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn summarize(trace: &TimeTrace, bins: usize) -> Result<TraceSummary> {
    summarize_values(trace.values(), bins)
}

pub fn summarize_values(values: &[f64], bins: usize) -> Result<TraceSummary> {
    let n = values.len();
    if n < 4 {
        return Err(Error::TraceTooShort { len: n, min: 4 });
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mean = values.iter().sum::<f64>() / n as f64;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    let median = if n.is_multiple_of(2) {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    } else {
        sorted[n / 2]
    };
    if median == 0.0 {
        return Err(Error::ZeroMedian);
    }
    let q1 = quantile(&sorted, 0.25);
    let q3 = quantile(&sorted, 0.75);
    let iqr = q3 - q1;
    Ok(TraceSummary {
        count: n,
        mean,
        stddev: var.sqrt(),
        median,
        q1,
        q3,
        iqr,
        rcv: iqr / median,
        histogram: Histogram::build(values, bins),
    })
}

/// RCV implied by a normal distribution with the given mean and σ.
pub fn gaussian_rcv_bound(sigma: f64, mean: f64) -> Result<f64> {
    if !(mean > 0.0 && mean.is_finite()) {
        return Err(Error::domain(format!("mean must be positive, got {mean}")));
    }
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::domain(format!("sigma must be non-negative, got {sigma}")));
    }
    Ok(GAUSSIAN_IQR_PER_SIGMA * sigma / mean)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_to_hundred() {
        let v: Vec<f64> = (1..=100).map(f64::from).collect();
        let s = summarize_values(&v, 10).unwrap();
        assert_eq!(s.median, 50.5);
        assert!((s.q1 - 25.75).abs() < 1e-12);
        assert!((s.q3 - 75.25).abs() < 1e-12);
        assert!((s.iqr - 49.5).abs() < 1e-12);
        assert!((s.rcv - 0.980).abs() < 1e-3);
        assert_eq!(s.rcv, s.iqr / s.median);
        assert_eq!(s.histogram.counts, vec![10; 10]);
        assert_eq!(s.mean, 50.5);
    }

    #[test]
    fn odd_median_and_errors() {
        let s = summarize_values(&[3.0, 1.0, 2.0, 5.0, 4.0], 2).unwrap();
        assert_eq!(s.median, 3.0);
        assert!(matches!(summarize_values(&[1.0, 2.0, 3.0], 2), Err(Error::TraceTooShort { .. })));
        assert!(matches!(
            summarize_values(&[-1.0, 0.0, 0.0, 1.0], 2),
            Err(Error::ZeroMedian)
        ));
    }

    #[test]
    fn constant_values_histogram() {
        let s = summarize_values(&[2.0; 8], 4).unwrap();
        assert_eq!(s.iqr, 0.0);
        assert_eq!(s.histogram.counts.iter().sum::<usize>(), 8);
    }

    #[test]
    fn gaussian_bound_examples() {
        assert!((gaussian_rcv_bound(13.0, 168.0).unwrap() - 0.1044).abs() < 1e-4);
        assert_eq!(gaussian_rcv_bound(0.0, 168.0).unwrap(), 0.0);
        assert!((gaussian_rcv_bound(18.7, 140.8).unwrap() - 0.179).abs() < 1e-3);
        assert!(gaussian_rcv_bound(1.0, 0.0).is_err());
        assert!(gaussian_rcv_bound(-1.0, 10.0).is_err());
    }
}
