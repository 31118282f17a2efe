use std::f64::consts::PI;

use rustfft::{num_complex::Complex, FftPlanner};
use serde::{Deserialize, Serialize};

use super::TimeTrace;
use crate::error::{Error, Result};

pub const DEFAULT_SEGMENT_LEN: usize = 128;

/// One-sided power spectral density in value-units²/Hz.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsdResult {
    pub freqs: Vec<f64>,
    pub psd: Vec<f64>,
    pub segment_count: usize,
}

impl PsdResult {
    pub fn df(&self) -> f64 {
        self.freqs.get(1).copied().unwrap_or(0.0)
    }

    /// Trapezoidal integral of the density over frequency.
    pub fn total_power(&self) -> f64 {
        self.freqs
            .windows(2)
            .zip(self.psd.windows(2))
            .map(|(f, p)| 0.5 * (f[1] - f[0]) * (p[0] + p[1]))
            .sum()
    }
}

/// Periodic (DFT-even) Hann window.
pub(crate) fn periodic_hann(len: usize) -> Vec<f64> {
    (0..len)
        .map(|i| 0.5 - 0.5 * (2.0 * PI * i as f64 / len as f64).cos())
        .collect()
}

/// Welch estimate: global mean removed, 50 % overlapping segments,
/// periodic Hann window, averaged one-sided periodograms.
///
/// Normalized as a density, so white noise of variance σ² sits at 2σ²τ0.
pub fn welch_psd(trace: &TimeTrace, segment_len: usize) -> Result<PsdResult> {
    let x = trace.values();
    let n = x.len();
    if segment_len < 4 {
        return Err(Error::domain(format!("segment length {segment_len} is below 4")));
    }
    if n < segment_len {
        return Err(Error::TraceTooShort {
            len: n,
            min: segment_len,
        });
    }
    let mean = x.iter().sum::<f64>() / n as f64;
    let window = periodic_hann(segment_len);
    let window_power: f64 = window.iter().map(|w| w * w).sum();
    let step = segment_len / 2;
    let segments = (n - segment_len) / step + 1;
    let bins = segment_len / 2 + 1;

    let fft = FftPlanner::new().plan_fft_forward(segment_len);
    let mut buf = vec![Complex::new(0.0, 0.0); segment_len];
    let mut acc = vec![0.0; bins];
    for s in 0..segments {
        let seg = &x[s * step..s * step + segment_len];
        for ((b, &v), &w) in buf.iter_mut().zip(seg).zip(&window) {
            *b = Complex::new((v - mean) * w, 0.0);
        }
        fft.process(&mut buf);
        for (a, b) in acc.iter_mut().zip(&buf) {
            *a += b.norm_sqr();
        }
    }

    let tau0 = trace.tau0_s();
    let scale = tau0 / (window_power * segments as f64);
    let nyquist = segment_len.is_multiple_of(2);
    let psd = acc
        .iter()
        .enumerate()
        .map(|(k, &p)| {
            let one_sided = k == 0 || (nyquist && k == bins - 1);
            p * scale * if one_sided { 1.0 } else { 2.0 }
        })
        .collect();
    let freqs = (0..bins)
        .map(|k| k as f64 / (segment_len as f64 * tau0))
        .collect();
    Ok(PsdResult {
        freqs,
        psd,
        segment_count: segments,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hann_is_periodic() {
        let w = periodic_hann(8);
        assert_eq!(w[0], 0.0);
        assert!((w[4] - 1.0).abs() < 1e-15);
        assert!((w[1] - w[7]).abs() < 1e-15);
        // mean of a periodic Hann is exactly 1/2, mean square 3/8
        assert!((w.iter().sum::<f64>() - 4.0).abs() < 1e-12);
        assert!((w.iter().map(|x| x * x).sum::<f64>() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn constant_trace_has_no_power() {
        let t = TimeTrace::new(30.0, vec![5.0; 512], "").unwrap();
        let p = welch_psd(&t, 128).unwrap();
        assert!(p.psd.iter().all(|&v| v == 0.0));
        assert_eq!(p.segment_count, 7);
        assert_eq!(p.freqs.len(), 65);
        assert!((p.freqs[64] - 1.0 / 60.0).abs() < 1e-15);
    }

    #[test]
    fn too_short() {
        let t = TimeTrace::new(30.0, vec![5.0; 100], "").unwrap();
        assert!(matches!(welch_psd(&t, 128), Err(Error::TraceTooShort { .. })));
        assert!(welch_psd(&t, 2).is_err());
    }
}
