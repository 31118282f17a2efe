//! Small dense Levenberg-Marquardt solver for a handful of parameters.

use nalgebra::{DMatrix, DVector};

pub(crate) trait LeastSquares {
    fn n_params(&self) -> usize;
    fn n_residuals(&self) -> usize;
    fn residuals(&self, p: &[f64], out: &mut [f64]);
    /// Row-major m×n Jacobian of the residuals.
    fn jacobian(&self, p: &[f64], out: &mut DMatrix<f64>);
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Settings {
    pub max_iter: usize,
    pub xtol: f64,
    pub gtol: f64,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            max_iter: 200,
            xtol: 1e-10,
            gtol: 1e-8,
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Outcome {
    pub params: Vec<f64>,
    pub cost: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn sum_sq(r: &[f64]) -> f64 {
    r.iter().map(|x| x * x).sum()
}

/// Largest cosine between the residual vector and a Jacobian column.
fn gradient_cosine(j: &DMatrix<f64>, g: &DVector<f64>, r_norm: f64) -> f64 {
    if r_norm == 0.0 {
        return 0.0;
    }
    (0..j.ncols())
        .map(|c| {
            let n = j.column(c).norm();
            if n == 0.0 {
                0.0
            } else {
                g[c].abs() / (n * r_norm)
            }
        })
        .fold(0.0, f64::max)
}

pub(crate) fn minimize<P: LeastSquares>(problem: &P, start: &[f64], settings: Settings) -> Outcome {
    let (m, n) = (problem.n_residuals(), problem.n_params());
    let mut p = start.to_vec();
    let mut r = vec![0.0; m];
    problem.residuals(&p, &mut r);
    let mut cost = sum_sq(&r);
    let mut jac = DMatrix::zeros(m, n);
    let mut trial = vec![0.0; n];
    let mut r_trial = vec![0.0; m];
    let mut lambda = 1e-3;
    let mut iterations = 0;

    let done = |p: Vec<f64>, cost, iterations, converged| Outcome {
        params: p,
        cost,
        iterations,
        converged,
    };

    if !cost.is_finite() {
        return done(p, cost, 0, false);
    }

    while iterations < settings.max_iter {
        problem.jacobian(&p, &mut jac);
        let rv = DVector::from_column_slice(&r);
        let g = jac.tr_mul(&rv);
        if cost == 0.0 || gradient_cosine(&jac, &g, cost.sqrt()) <= settings.gtol {
            return done(p, cost, iterations, true);
        }
        let h = jac.tr_mul(&jac);
        let diag: Vec<f64> = (0..n).map(|i| h[(i, i)].max(1e-300)).collect();

        loop {
            iterations += 1;
            let mut a = h.clone();
            for (i, d) in diag.iter().enumerate() {
                a[(i, i)] += lambda * d;
            }
            let step = match a.cholesky() {
                Some(ch) => ch.solve(&(-&g)),
                None => {
                    lambda *= 10.0;
                    if iterations >= settings.max_iter {
                        return done(p, cost, iterations, false);
                    }
                    continue;
                }
            };
            for i in 0..n {
                trial[i] = p[i] + step[i];
            }
            let small_step = (0..n)
                .all(|i| step[i].abs() <= settings.xtol * (p[i].abs() + settings.xtol));
            problem.residuals(&trial, &mut r_trial);
            let trial_cost = sum_sq(&r_trial);
            if trial_cost.is_finite() && trial_cost < cost {
                p.copy_from_slice(&trial);
                std::mem::swap(&mut r, &mut r_trial);
                cost = trial_cost;
                lambda = (lambda / 10.0).max(1e-12);
                if small_step {
                    return done(p, cost, iterations, true);
                }
                break;
            }
            if small_step {
                // no representable improvement left
                return done(p, cost, iterations, true);
            }
            lambda *= 10.0;
            if iterations >= settings.max_iter {
                return done(p, cost, iterations, false);
            }
        }
    }
    done(p, cost, iterations, false)
}
