use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

/// Coherence decay models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    /// A·exp(−τ/T1) + C
    T1,
    /// A·exp(−τ/T2E)·sin(2πΔτ + φ) + C
    Echo,
}

impl Model {
    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            Model::T1 => &["A", "T1", "C"],
            Model::Echo => &["A", "T2E", "Delta", "phi", "C"],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Model::T1 => "t1",
            Model::Echo => "echo",
        }
    }

    pub fn n_params(self) -> usize {
        self.param_names().len()
    }

    /// Minimum number of points accepted for a fit.
    pub fn min_points(self) -> usize {
        match self {
            Model::T1 => 5,
            Model::Echo => 8,
        }
    }

    /// Index of the decay time; it is fitted through its logarithm.
    pub(crate) fn time_index(self) -> usize {
        1
    }

    pub fn eval(self, p: &[f64], tau: f64) -> f64 {
        match self {
            Model::T1 => p[0] * (-tau / p[1]).exp() + p[2],
            Model::Echo => {
                p[0] * (-tau / p[1]).exp() * (2.0 * PI * p[2] * tau + p[3]).sin() + p[4]
            }
        }
    }

    /// Partial derivatives with respect to the natural parameters.
    pub fn gradient(self, p: &[f64], tau: f64, out: &mut [f64]) {
        match self {
            Model::T1 => {
                let (a, t) = (p[0], p[1]);
                let e = (-tau / t).exp();
                out[0] = e;
                out[1] = a * e * tau / (t * t);
                out[2] = 1.0;
            }
            Model::Echo => {
                let (a, t, delta, phi) = (p[0], p[1], p[2], p[3]);
                let e = (-tau / t).exp();
                let arg = 2.0 * PI * delta * tau + phi;
                let (s, c) = arg.sin_cos();
                out[0] = e * s;
                out[1] = a * e * s * tau / (t * t);
                out[2] = a * e * c * 2.0 * PI * tau;
                out[3] = a * e * c;
                out[4] = 1.0;
            }
        }
    }

    /// Brings fitted parameters to the canonical branch: A ≥ 0, Δ ≥ 0, φ ∈ (−π, π].
    pub(crate) fn canonicalize(self, p: &mut [f64]) {
        if self == Model::Echo {
            if p[2] < 0.0 {
                p[2] = -p[2];
                p[3] = -p[3];
                p[0] = -p[0];
            }
            if p[0] < 0.0 {
                p[0] = -p[0];
                p[3] += PI;
            }
            p[3] = wrap_phase(p[3]);
        }
    }
}

pub(crate) fn wrap_phase(phi: f64) -> f64 {
    let mut x = phi.rem_euclid(2.0 * PI);
    if x > PI {
        x -= 2.0 * PI;
    }
    x
}
