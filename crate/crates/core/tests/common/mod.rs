#![allow(dead_code)]

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(seed: u64, n: usize, mean: f64, sigma: f64) -> Vec<f64> {
    let mut r = rng(seed);
    let d = Normal::new(mean, sigma).unwrap();
    (0..n).map(|_| d.sample(&mut r)).collect()
}

/// Cross-section of a trench as the solid's boundary edges, in (x, z) with
/// the substrate surface at z = 0 and the floor at z = −depth.
pub struct CrossSection {
    pub width: f64,
    pub depth: f64,
    pub inset: f64,
    edges: Vec<[(f64, f64); 2]>,
}

impl CrossSection {
    pub fn new(width: f64, depth: f64, sidewall_deg: f64) -> Self {
        let inset = if sidewall_deg == 90.0 {
            0.0
        } else {
            depth / sidewall_deg.to_radians().tan()
        };
        let far = 1e9;
        let edges = vec![
            [(-far, 0.0), (0.0, 0.0)],
            [(0.0, 0.0), (inset, -depth)],
            [(width - inset, -depth), (width, 0.0)],
            [(width, 0.0), (far, 0.0)],
        ];
        Self {
            width,
            depth,
            inset,
            edges,
        }
    }

    /// Whether the floor point at `x` sees the source along direction
    /// (sin θ·c, cos θ) back toward the beam, `c` the cross-trench projection.
    pub fn floor_lit(&self, x: f64, tilt_deg: f64, cross_factor: f64) -> bool {
        let t = tilt_deg.to_radians();
        // backward ray: toward the source
        let dir = (-t.sin() * cross_factor, t.cos());
        let origin = (x, -self.depth);
        !self.edges.iter().any(|e| ray_hits(origin, dir, e[0], e[1]))
    }

    pub fn floor_samples(&self, pitch: f64) -> impl Iterator<Item = f64> + '_ {
        let lo = self.inset;
        let hi = self.width - self.inset;
        let n = ((hi - lo) / pitch).floor() as usize;
        (0..=n).map(move |i| lo + (i as f64 + 0.5) * pitch).filter(move |&x| x < hi)
    }

    /// Floor length lit by both depositions, by sampling.
    pub fn overlap(&self, tilt1: f64, tilt2: f64, cross_factor: f64, pitch: f64) -> f64 {
        self.floor_samples(pitch)
            .filter(|&x| self.floor_lit(x, tilt1, cross_factor) && self.floor_lit(x, tilt2, cross_factor))
            .count() as f64
            * pitch
    }

    /// Lit floor as an interval [first lit sample, last lit sample].
    pub fn lit_interval(&self, tilt: f64, pitch: f64) -> Option<(f64, f64)> {
        let lit: Vec<f64> = self.floor_samples(pitch).filter(|&x| self.floor_lit(x, tilt, 1.0)).collect();
        Some((*lit.first()?, *lit.last()?))
    }
}

fn cross(a: (f64, f64), b: (f64, f64)) -> f64 {
    a.0 * b.1 - a.1 * b.0
}

/// Ray from `o` along `d` against the closed segment p–q, ignoring grazing
/// contact at the ray origin.
fn ray_hits(o: (f64, f64), d: (f64, f64), p: (f64, f64), q: (f64, f64)) -> bool {
    let e = (q.0 - p.0, q.1 - p.1);
    let denom = cross(d, e);
    if denom.abs() < 1e-15 {
        return false;
    }
    let w = (p.0 - o.0, p.1 - o.1);
    let t = cross(w, e) / denom;
    let u = cross(w, d) / denom;
    t > 1e-9 && (0.0..=1.0).contains(&u)
}

/// Lit floor in 3D for an infinitely long straight trench: marches the
/// backward ray of a beam with tilt θ and azimuth `rotation_deg` away from
/// the cross-trench direction, testing each point against the solid.
pub fn floor_lit_3d(sec: &CrossSection, x: f64, tilt_deg: f64, rotation_deg: f64) -> bool {
    let (t, r) = (tilt_deg.to_radians(), rotation_deg.to_radians());
    let dir = [-t.sin() * r.cos(), -t.sin() * r.sin(), t.cos()];
    let steps = 4000;
    let dz = sec.depth / steps as f64;
    let ds = dz / dir[2];
    let mut p = [x, 0.0, -sec.depth];
    for _ in 0..steps {
        for k in 0..3 {
            p[k] += dir[k] * ds;
        }
        let z = p[2].min(0.0);
        let wall = sec.inset * (-z) / sec.depth;
        let inside = p[0] >= wall - 1e-9 && p[0] <= sec.width - wall + 1e-9;
        if !inside {
            return false;
        }
    }
    true
}

pub fn overlap_3d(sec: &CrossSection, tilt1: f64, tilt2: f64, rotation_deg: f64, pitch: f64) -> f64 {
    sec.floor_samples(pitch)
        .filter(|&x| floor_lit_3d(sec, x, tilt1, rotation_deg) && floor_lit_3d(sec, x, tilt2, rotation_deg))
        .count() as f64
        * pitch
}

/// Overlapping Allan deviation straight from the definition, O(N·m) per τ.
pub fn allan_direct(x: &[f64], m: usize) -> f64 {
    let n = x.len();
    let avg = |j: usize| x[j..j + m].iter().sum::<f64>() / m as f64;
    let terms = n - 2 * m + 1;
    let s: f64 = (0..terms).map(|j| (avg(j + m) - avg(j)).powi(2)).sum();
    (s / (2.0 * terms as f64)).sqrt()
}

/// Welch estimate with an O(L²) DFT per segment, written independently.
pub fn welch_naive(x: &[f64], tau0: f64, l: usize) -> Vec<f64> {
    let n = x.len();
    let mean = x.iter().sum::<f64>() / n as f64;
    let w: Vec<f64> = (0..l).map(|i| (PI * i as f64 / l as f64).sin().powi(2)).collect();
    let u: f64 = w.iter().map(|v| v * v).sum();
    let starts: Vec<usize> = (0..).map(|k| k * (l / 2)).take_while(|s| s + l <= n).collect();
    let mut out = vec![0.0; l / 2 + 1];
    for &s in &starts {
        for (k, o) in out.iter_mut().enumerate() {
            let (mut re, mut im) = (0.0, 0.0);
            for i in 0..l {
                let v = (x[s + i] - mean) * w[i];
                let a = -2.0 * PI * (k * i) as f64 / l as f64;
                re += v * a.cos();
                im += v * a.sin();
            }
            let one_sided = if k == 0 || 2 * k == l { 1.0 } else { 2.0 };
            *o += one_sided * (re * re + im * im) * tau0 / u;
        }
    }
    out.iter().map(|v| v / starts.len() as f64).collect()
}

/// Ordinary least-squares slope of y against x.
pub fn slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

pub fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}
