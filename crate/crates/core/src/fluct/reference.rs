use serde::{Deserialize, Serialize};

use super::PsdResult;

/// White-noise reference level in µs²/Hz.
pub const DEFAULT_WHITE_LEVEL: f64 = 6e3;

/// Guide lines drawn over the PSD and Allan plots. Not fitted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceLines {
    /// (frequency, psd) of the second PSD point.
    pub anchor: (f64, f64),
    pub white_level: f64,
    /// Slope −1 line through the anchor, at every PSD frequency.
    pub one_over_f: Vec<f64>,
    /// Constant white level at every PSD frequency.
    pub white_psd: Vec<f64>,
}

impl ReferenceLines {
    pub fn one_over_f_at(&self, f: f64) -> f64 {
        let (f2, p2) = self.anchor;
        if p2 == 0.0 {
            0.0
        } else {
            p2 * f2 / f
        }
    }

    /// √(A_W/τ) on the Allan axes.
    pub fn white_adev_at(&self, tau: f64) -> f64 {
        (self.white_level / tau).sqrt()
    }

    pub fn white_adev(&self, taus: &[f64]) -> Vec<f64> {
        taus.iter().map(|&t| self.white_adev_at(t)).collect()
    }
}

/// Returns `None` when the PSD has fewer than two points.
pub fn reference_lines(psd: &PsdResult, white_level: f64) -> Option<ReferenceLines> {
    if psd.freqs.len() < 2 {
        return None;
    }
    let mut lines = ReferenceLines {
        anchor: (psd.freqs[1], psd.psd[1]),
        white_level,
        one_over_f: Vec::new(),
        white_psd: vec![white_level; psd.freqs.len()],
    };
    lines.one_over_f = psd.freqs.iter().map(|&f| lines.one_over_f_at(f)).collect();
    Some(lines)
}
