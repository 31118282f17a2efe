//! Least-squares fits of T1 relaxation and Hahn-echo decay curves.
//!
//! Decay times are fitted through their logarithm so they stay positive.
//! Standard errors come from the local quadratic model,
//! `cov = s²·(JᵀJ)⁻¹` evaluated in the natural parameters, with `s²` the
//! residual variance for unweighted fits and 1 when per-point sigmas are given.

mod lm;
mod model;

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

pub use model::Model;

use crate::error::{Error, Result};
use lm::{LeastSquares, Settings};

/// Points of one coherence measurement. Delays in µs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayCurve {
    delays: Vec<f64>,
    signals: Vec<f64>,
    sigmas: Option<Vec<f64>>,
}

impl DecayCurve {
    pub fn new(delays: Vec<f64>, signals: Vec<f64>) -> Result<Self> {
        Self::build(delays, signals, None)
    }

    pub fn with_sigmas(delays: Vec<f64>, signals: Vec<f64>, sigmas: Vec<f64>) -> Result<Self> {
        Self::build(delays, signals, Some(sigmas))
    }

    fn build(delays: Vec<f64>, signals: Vec<f64>, sigmas: Option<Vec<f64>>) -> Result<Self> {
        if delays.len() != signals.len() {
            return Err(Error::Validation(format!(
                "{} delays but {} signals",
                delays.len(),
                signals.len()
            )));
        }
        if let Some(s) = &sigmas {
            if s.len() != delays.len() {
                return Err(Error::Validation("sigma column length differs".into()));
            }
            if s.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
                return Err(Error::Validation("sigmas must be positive".into()));
            }
        }
        if delays.iter().chain(&signals).any(|x| !x.is_finite()) {
            return Err(Error::Validation("non-finite value in curve".into()));
        }
        if delays.first().is_some_and(|&d| d < 0.0) {
            return Err(Error::Validation("delays must be non-negative".into()));
        }
        if delays.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Validation("delays must be strictly increasing".into()));
        }
        Ok(Self {
            delays,
            signals,
            sigmas,
        })
    }

    pub fn delays(&self) -> &[f64] {
        &self.delays
    }

    pub fn signals(&self) -> &[f64] {
        &self.signals
    }

    pub fn sigmas(&self) -> Option<&[f64]> {
        self.sigmas.as_deref()
    }

    pub fn len(&self) -> usize {
        self.delays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.delays.is_empty()
    }

    fn weight(&self, i: usize) -> f64 {
        self.sigmas.as_ref().map_or(1.0, |s| 1.0 / s[i])
    }

    fn range(&self) -> f64 {
        let (lo, hi) = self
            .signals
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &y| (lo.min(y), hi.max(y)));
        hi - lo
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub model: Model,
    /// In the order of [`Model::param_names`].
    pub params: Vec<f64>,
    pub stderr: Vec<f64>,
    pub residual_rms: f64,
    pub converged: bool,
    pub iterations: usize,
    pub warnings: Vec<String>,
}

impl FitResult {
    pub fn value(&self, name: &str) -> Option<f64> {
        self.index(name).map(|i| self.params[i])
    }

    pub fn stderr_of(&self, name: &str) -> Option<f64> {
        self.index(name).map(|i| self.stderr[i])
    }

    fn index(&self, name: &str) -> Option<usize> {
        self.model.param_names().iter().position(|&n| n == name)
    }

    pub fn predict(&self, tau: f64) -> f64 {
        self.model.eval(&self.params, tau)
    }

    pub fn residuals(&self, curve: &DecayCurve) -> Vec<f64> {
        curve
            .delays
            .iter()
            .zip(&curve.signals)
            .map(|(&t, &y)| y - self.predict(t))
            .collect()
    }
}

struct CurveProblem<'a> {
    curve: &'a DecayCurve,
    model: Model,
}

impl CurveProblem<'_> {
    fn natural(&self, p: &[f64]) -> Vec<f64> {
        let mut q = p.to_vec();
        let k = self.model.time_index();
        q[k] = q[k].exp();
        q
    }
}

impl LeastSquares for CurveProblem<'_> {
    fn n_params(&self) -> usize {
        self.model.n_params()
    }

    fn n_residuals(&self) -> usize {
        self.curve.len()
    }

    fn residuals(&self, p: &[f64], out: &mut [f64]) {
        let q = self.natural(p);
        for (i, o) in out.iter_mut().enumerate() {
            let (t, y) = (self.curve.delays[i], self.curve.signals[i]);
            *o = (self.model.eval(&q, t) - y) * self.curve.weight(i);
        }
    }

    fn jacobian(&self, p: &[f64], out: &mut DMatrix<f64>) {
        let q = self.natural(p);
        let k = self.model.time_index();
        let mut g = vec![0.0; q.len()];
        for i in 0..self.curve.len() {
            self.model.gradient(&q, self.curve.delays[i], &mut g);
            // chain rule through T = exp(u)
            g[k] *= q[k];
            let w = self.curve.weight(i);
            for (c, gc) in g.iter().enumerate() {
                out[(i, c)] = gc * w;
            }
        }
    }
}

/// Robust noise scale from successive differences.
fn noise_floor(y: &[f64]) -> f64 {
    let mut d: Vec<f64> = y.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    if d.is_empty() {
        return 0.0;
    }
    d.sort_by(f64::total_cmp);
    let med = d[d.len() / 2];
    med / (0.674_489_750_196_081_7 * std::f64::consts::SQRT_2)
}

fn check_data(curve: &DecayCurve, model: Model) -> Result<()> {
    if curve.len() < model.min_points() {
        return Err(Error::Validation(format!(
            "{:?} fit needs at least {} points, got {}",
            model,
            model.min_points(),
            curve.len()
        )));
    }
    let range = curve.range();
    let scale = curve.signals.iter().fold(0.0_f64, |m, y| m.max(y.abs()));
    let noise = 3.0 * noise_floor(&curve.signals);
    if range <= noise.max(1e-12 * scale) {
        return Err(Error::DegenerateData { range, noise });
    }
    Ok(())
}

/// Least-squares slope and intercept.
fn linear_regression(x: &[f64], y: &[f64]) -> Option<(f64, f64)> {
    let n = x.len() as f64;
    if x.len() < 2 {
        return None;
    }
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

fn solve(curve: &DecayCurve, model: Model, start: Vec<f64>, warnings: Vec<String>) -> Result<FitResult> {
    let problem = CurveProblem { curve, model };
    let k = model.time_index();
    let mut internal = start;
    internal[k] = internal[k].ln();
    let settings = Settings::default();
    let out = lm::minimize(&problem, &internal, settings);
    if !out.converged {
        return Err(Error::NonConvergence(out.iterations));
    }
    let mut params = problem.natural(&out.params);
    model.canonicalize(&mut params);
    let stderr = standard_errors(curve, model, &params, out.cost);
    let residual_rms = {
        let ss: f64 = curve
            .delays
            .iter()
            .zip(&curve.signals)
            .map(|(&t, &y)| (y - model.eval(&params, t)).powi(2))
            .sum();
        (ss / curve.len() as f64).sqrt()
    };
    Ok(FitResult {
        model,
        params,
        stderr,
        residual_rms,
        converged: true,
        iterations: out.iterations,
        warnings,
    })
}

fn standard_errors(curve: &DecayCurve, model: Model, params: &[f64], weighted_cost: f64) -> Vec<f64> {
    let (m, n) = (curve.len(), model.n_params());
    let mut j = DMatrix::zeros(m, n);
    let mut g = vec![0.0; n];
    for i in 0..m {
        model.gradient(params, curve.delays[i], &mut g);
        let w = curve.weight(i);
        for c in 0..n {
            j[(i, c)] = g[c] * w;
        }
    }
    let s2 = if curve.sigmas.is_some() || m <= n {
        1.0
    } else {
        weighted_cost / (m - n) as f64
    };
    match j.tr_mul(&j).try_inverse() {
        Some(cov) => (0..n).map(|i| (cov[(i, i)].max(0.0) * s2).sqrt()).collect(),
        None => vec![f64::INFINITY; n],
    }
}

/// Fit A·exp(−τ/T1) + C.
pub fn fit_t1(curve: &DecayCurve) -> Result<FitResult> {
    check_data(curve, Model::T1)?;
    let y = &curve.signals;
    let t = &curve.delays;
    let n = y.len();
    let tail = (n / 10).max(1);
    let c0 = y[n - tail..].iter().sum::<f64>() / tail as f64;
    let a0 = y[0] - c0;

    let cut = 0.05 * a0.abs();
    let (xs, ls): (Vec<f64>, Vec<f64>) = t
        .iter()
        .zip(y)
        .filter(|(_, &v)| (v - c0).abs() > cut)
        .map(|(&ti, &v)| (ti, (v - c0).abs().ln()))
        .unzip();
    let span = t[n - 1] - t[0];
    let t0 = match linear_regression(&xs, &ls) {
        Some((slope, _)) if slope < 0.0 => -1.0 / slope,
        _ => span / 3.0,
    };
    let t0 = if t0.is_finite() && t0 > 0.0 { t0 } else { span / 3.0 };
    solve(curve, Model::T1, vec![a0, t0, c0], Vec::new())
}

/// Power spectrum of the mean-subtracted signal on an oversampled grid.
/// Works for non-uniform delays.
fn spectrum(t: &[f64], y: &[f64], span: f64) -> (Vec<f64>, Vec<f64>) {
    const OVERSAMPLE: usize = 4;
    let mean = y.iter().sum::<f64>() / y.len() as f64;
    let df = 1.0 / (span * OVERSAMPLE as f64);
    let n_freq = OVERSAMPLE * y.len() / 2;
    let freqs: Vec<f64> = (1..=n_freq).map(|k| k as f64 * df).collect();
    let power = freqs
        .iter()
        .map(|&f| {
            let (mut re, mut im) = (0.0, 0.0);
            for (&ti, &yi) in t.iter().zip(y) {
                let (s, c) = (2.0 * PI * f * ti).sin_cos();
                re += (yi - mean) * c;
                im -= (yi - mean) * s;
            }
            re * re + im * im
        })
        .collect();
    (freqs, power)
}

fn dominant_frequency(t: &[f64], y: &[f64]) -> Result<f64> {
    let span = t[t.len() - 1] - t[0];
    let (freqs, power) = spectrum(t, y, span);
    let peaks: Vec<usize> = (1..power.len() - 1)
        .filter(|&i| power[i] > power[i - 1] && power[i] >= power[i + 1])
        .collect();
    let best = peaks
        .iter()
        .copied()
        .max_by(|&a, &b| power[a].total_cmp(&power[b]));
    let Some(best) = best else {
        return Err(Error::AmbiguousFrequency("spectrum has no peak".into()));
    };
    let global = power.iter().copied().fold(0.0, f64::max);
    if power[best] < global || freqs[best] < 1.0 / span {
        return Err(Error::AmbiguousFrequency(
            "less than one oscillation period resolved".into(),
        ));
    }
    // a second distinct peak, at least one natural bin away, of comparable power
    for &p in &peaks {
        if p != best && (freqs[p] - freqs[best]).abs() >= 1.0 / span && power[p] >= 0.9 * power[best] {
            return Err(Error::AmbiguousFrequency(format!(
                "peaks at {:.6} and {:.6} MHz within 10% power",
                freqs[best], freqs[p]
            )));
        }
    }
    // parabolic refinement on the log power
    let (l, c, r) = (power[best - 1].ln(), power[best].ln(), power[best + 1].ln());
    let denom = l - 2.0 * c + r;
    let shift = if denom < 0.0 { 0.5 * (l - r) / denom } else { 0.0 };
    let df = freqs[1] - freqs[0];
    Ok(freqs[best] + shift.clamp(-0.5, 0.5) * df)
}

/// Fit A·exp(−τ/T2E)·sin(2πΔτ + φ) + C.
pub fn fit_echo(curve: &DecayCurve) -> Result<FitResult> {
    check_data(curve, Model::Echo)?;
    let t = &curve.delays;
    let y = &curve.signals;
    let n = y.len();
    let span = t[n - 1] - t[0];
    let delta0 = dominant_frequency(t, y)?;

    let mut warnings = Vec::new();
    let periods = delta0 * span;
    if periods < 3.0 {
        warnings.push(format!("only {periods:.1} oscillation periods sampled"));
    }

    let c0 = y.iter().sum::<f64>() / n as f64;
    // envelope: largest excursion within each period-long window
    let period = 1.0 / delta0;
    let mut env_t = Vec::new();
    let mut env_l = Vec::new();
    let mut start = 0;
    while start < n {
        let window_end = t[start] + period;
        let mut end = start;
        let mut best = start;
        while end < n && t[end] < window_end {
            if (y[end] - c0).abs() > (y[best] - c0).abs() {
                best = end;
            }
            end += 1;
        }
        let dev = (y[best] - c0).abs();
        if dev > 0.0 {
            env_t.push(t[best]);
            env_l.push(dev.ln());
        }
        start = end.max(start + 1);
    }
    let (t2_0, a0) = match linear_regression(&env_t, &env_l) {
        Some((slope, icpt)) if slope < 0.0 => (-1.0 / slope, icpt.exp()),
        _ => (span, env_l.iter().copied().fold(f64::NEG_INFINITY, f64::max).exp()),
    };
    let t2_0 = if t2_0.is_finite() && t2_0 > 0.0 { t2_0 } else { span };

    let phi0 = (0..8)
        .map(|k| 2.0 * PI * k as f64 / 8.0)
        .min_by(|&a, &b| {
            let cost = |phi: f64| -> f64 {
                let p = [a0, t2_0, delta0, phi, c0];
                t.iter()
                    .zip(y)
                    .map(|(&ti, &yi)| (Model::Echo.eval(&p, ti) - yi).powi(2))
                    .sum()
            };
            cost(a).total_cmp(&cost(b))
        })
        .unwrap_or(0.0);

    solve(curve, Model::Echo, vec![a0, t2_0, delta0, phi0, c0], warnings)
}

pub fn fit(curve: &DecayCurve, model: Model) -> Result<FitResult> {
    match model {
        Model::T1 => fit_t1(curve),
        Model::Echo => fit_echo(curve),
    }
}

/// Residual whiteness threshold on |lag-1 autocorrelation|.
pub const AUTOCORR_LIMIT: f64 = 0.3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub lag1_autocorr: f64,
    /// Only when per-point sigmas are available.
    pub reduced_chi2: Option<f64>,
    pub pass: bool,
}

/// Lag-1 autocorrelation of the residuals and the reduced χ².
///
/// Residuals at the floating-point floor (rms below 1e-9 of the signal range)
/// carry no structure and are reported as uncorrelated.
pub fn residual_diagnostics(curve: &DecayCurve, result: &FitResult) -> Diagnostics {
    let res = result.residuals(curve);
    let n = res.len();
    let mean = res.iter().sum::<f64>() / n as f64;
    let var: f64 = res.iter().map(|r| (r - mean).powi(2)).sum();
    let rms = (res.iter().map(|r| r * r).sum::<f64>() / n as f64).sqrt();
    let lag1_autocorr = if var == 0.0 || rms < 1e-9 * curve.range() {
        0.0
    } else {
        res.windows(2)
            .map(|w| (w[0] - mean) * (w[1] - mean))
            .sum::<f64>()
            / var
    };
    let dof = n.saturating_sub(result.model.n_params()).max(1) as f64;
    let reduced_chi2 = curve.sigmas.as_ref().map(|s| {
        res.iter()
            .zip(s)
            .map(|(r, s)| (r / s).powi(2))
            .sum::<f64>()
            / dof
    });
    Diagnostics {
        lag1_autocorr,
        reduced_chi2,
        pass: lag1_autocorr.abs() < AUTOCORR_LIMIT,
    }
}
