use serde::{Deserialize, Serialize};

use super::{TimeTrace, MIN_TRACE_LEN};
use crate::error::{Error, Result};

const POINTS_PER_DECADE: f64 = 30.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AllanResult {
    /// Averaging factors m (τ = m·τ0).
    pub factors: Vec<usize>,
    pub taus: Vec<f64>,
    /// Deviation in the trace's value units.
    pub adev: Vec<f64>,
    /// Number of difference terms N − 2m + 1 behind each point.
    pub counts: Vec<usize>,
}

/// Averaging factors: every m up to N/8, then log-spaced up to N/4.
pub fn tau_grid(n: usize) -> Vec<usize> {
    let dense = (n / 8).max(1);
    let top = n / 4;
    let mut grid: Vec<usize> = (1..=dense.min(top)).collect();
    let mut k = 1.0;
    loop {
        let m = (dense as f64 * 10f64.powf(k / POINTS_PER_DECADE)).round() as usize;
        if m > top {
            break;
        }
        if m > *grid.last().unwrap_or(&0) {
            grid.push(m);
        }
        k += 1.0;
    }
    if top > 0 && grid.last() != Some(&top) {
        grid.push(top);
    }
    grid
}

/// Overlapping Allan deviation, values treated as frequency-type data.
///
/// σ²(mτ0) = 1/(2(N−2m+1)) Σ_j (ȳ_{j+m} − ȳ_j)², ȳ_j the mean of `values[j..j+m]`.
pub fn overlapping_allan(trace: &TimeTrace) -> Result<AllanResult> {
    let x = trace.values();
    let n = x.len();
    if n < MIN_TRACE_LEN {
        return Err(Error::TraceTooShort {
            len: n,
            min: MIN_TRACE_LEN,
        });
    }
    let mean = x.iter().sum::<f64>() / n as f64;
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(0.0);
    let mut acc = 0.0;
    for &v in x {
        acc += v - mean;
        prefix.push(acc);
    }

    let factors = tau_grid(n);
    let mut taus = Vec::with_capacity(factors.len());
    let mut adev = Vec::with_capacity(factors.len());
    let mut counts = Vec::with_capacity(factors.len());
    for &m in &factors {
        let terms = n - 2 * m + 1;
        let sum: f64 = (0..terms)
            .map(|j| {
                let d = prefix[j + 2 * m] - 2.0 * prefix[j + m] + prefix[j];
                d * d
            })
            .sum();
        let mf = m as f64;
        taus.push(mf * trace.tau0_s());
        adev.push((sum / (2.0 * terms as f64 * mf * mf)).sqrt());
        counts.push(terms);
    }
    Ok(AllanResult {
        factors,
        taus,
        adev,
        counts,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AllanPeak {
    pub tau: f64,
    pub adev: f64,
    /// Ratio of the peak to the white-noise line √(A_W/τ) at the same τ.
    pub excess: f64,
}

/// Local maxima of the Allan curve that rise above the white-noise line.
///
/// Nothing is fitted; this only flags bumps such as those a Lorentzian
/// process would produce.
pub fn allan_peaks(result: &AllanResult, white_level: f64) -> Vec<AllanPeak> {
    let a = &result.adev;
    (1..a.len().saturating_sub(1))
        .filter(|&i| a[i] > a[i - 1] && a[i] >= a[i + 1])
        .filter_map(|i| {
            let white = (white_level / result.taus[i]).sqrt();
            (a[i] > white).then(|| AllanPeak {
                tau: result.taus[i],
                adev: a[i],
                excess: if white > 0.0 { a[i] / white } else { f64::INFINITY },
            })
        })
        .collect()
}
