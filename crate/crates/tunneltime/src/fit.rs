//! Least-squares fit of a Gaussian dip on a flat baseline:
//!
//! ```text
//!   rate(tau) = baseline * (1 - V exp(-(tau - tau0)^2 / (2 sigma^2)))
//! ```
//!
//! Levenberg-Marquardt with an analytic Jacobian; four parameters
//! (baseline, visibility, center, width). Initial values are read off the
//! data (outer-edge baseline, minimum position, half-depth width), which is
//! enough for the smooth noise-free scans produced by this crate.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DipFit {
    pub center_fs: f64,
    pub width_fs: f64,
    pub visibility: f64,
    pub baseline: f64,
    pub iterations: usize,
    pub residual_rms: f64,
}

/// Minimum visibility for a scan to count as containing a dip.
const MIN_VISIBILITY: f64 = 0.02;
const MAX_ITERATIONS: usize = 200;

pub fn fit_dip(delays_fs: &[f64], rates: &[f64]) -> Result<DipFit> {
    if delays_fs.len() != rates.len() {
        return Err(Error::invalid("delay and rate arrays differ in length"));
    }
    if delays_fs.len() < 7 {
        return Err(Error::invalid(format!(
            "dip fit needs at least 7 points, got {}",
            delays_fs.len()
        )));
    }
    if delays_fs.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("delays must be strictly increasing"));
    }
    if rates.iter().any(|r| !r.is_finite()) {
        return Err(Error::invalid("rates must be finite"));
    }

    let n = delays_fs.len();
    // baseline from the outer 10% of points on each side (at least one each)
    let edge = (n / 10).max(1);
    let left_mean = rates.iter().take(edge).sum::<f64>() / edge as f64;
    let right_mean = rates.iter().rev().take(edge).sum::<f64>() / edge as f64;
    let baseline0 = {
        let b = 0.5 * (left_mean + right_mean);
        if b > 0.0 {
            b
        } else {
            1.0
        }
    };

    let (min_idx, &min_rate) = rates
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| a.total_cmp(b))
        .expect("non-empty");
    let visibility0 = (1.0 - min_rate / baseline0).clamp(0.0, 1.5);
    if visibility0 < MIN_VISIBILITY {
        return Err(Error::DipNotFound {
            visibility: visibility0,
        });
    }

    let center0 = delays_fs[min_idx];
    let half_level = baseline0 - 0.5 * (baseline0 - min_rate);
    let mut right = delays_fs[n - 1];
    for i in min_idx..n {
        if rates[i] > half_level {
            right = delays_fs[i];
            break;
        }
    }
    let mut left = delays_fs[0];
    for i in (0..=min_idx).rev() {
        if rates[i] > half_level {
            left = delays_fs[i];
            break;
        }
    }
    let hwhm = (0.5 * (right - left)).max(delays_fs[1] - delays_fs[0]);
    let sigma0 = hwhm / (2.0f64.ln() * 2.0).sqrt();

    let mut params = [baseline0, visibility0, center0, sigma0];
    let mut lambda = 1e-3;
    let mut cost = cost_of(&params, delays_fs, rates);
    let mut iterations = 0;

    while iterations < MAX_ITERATIONS {
        iterations += 1;
        let (jtj, jtr) = normal_equations(&params, delays_fs, rates);

        let mut step = None;
        for _ in 0..12 {
            let mut damped = jtj;
            for i in 0..4 {
                damped[i][i] += lambda * jtj[i][i].max(1e-12);
            }
            if let Some(delta) = solve4(damped, jtr) {
                let trial = [
                    params[0] - delta[0],
                    params[1] - delta[1],
                    params[2] - delta[2],
                    params[3] - delta[3],
                ];
                let trial_cost = cost_of(&trial, delays_fs, rates);
                if trial_cost.is_finite() && trial_cost <= cost {
                    step = Some((trial, trial_cost, delta));
                    break;
                }
            }
            lambda *= 10.0;
        }

        match step {
            Some((trial, trial_cost, delta)) => {
                let moved: f64 = delta
                    .iter()
                    .zip(params.iter())
                    .map(|(d, p)| (d / p.abs().max(1e-9)).abs())
                    .fold(0.0, f64::max);
                let improved = cost - trial_cost;
                params = trial;
                cost = trial_cost;
                lambda = (lambda / 3.0).max(1e-12);
                if moved < 1e-12 || improved < 1e-18 {
                    break;
                }
            }
            None => break,
        }
    }

    let fit = DipFit {
        center_fs: params[2],
        width_fs: params[3].abs(),
        visibility: params[1],
        baseline: params[0],
        iterations,
        residual_rms: (cost / n as f64).sqrt(),
    };

    if iterations >= MAX_ITERATIONS {
        return Err(Error::FitDidNotConverge {
            center_fs: fit.center_fs,
            width_fs: fit.width_fs,
            visibility: fit.visibility,
            iterations,
        });
    }
    if fit.visibility < MIN_VISIBILITY
        || fit.center_fs < delays_fs[0]
        || fit.center_fs > delays_fs[n - 1]
    {
        return Err(Error::DipNotFound {
            visibility: fit.visibility,
        });
    }
    Ok(fit)
}

fn model(p: &[f64; 4], tau: f64) -> f64 {
    let g = (-(tau - p[2]).powi(2) / (2.0 * p[3] * p[3])).exp();
    p[0] * (1.0 - p[1] * g)
}

fn cost_of(p: &[f64; 4], delays: &[f64], rates: &[f64]) -> f64 {
    delays
        .iter()
        .zip(rates)
        .map(|(&tau, &y)| (model(p, tau) - y).powi(2))
        .sum()
}

/// J^T J and J^T r for the current parameters.
fn normal_equations(p: &[f64; 4], delays: &[f64], rates: &[f64]) -> ([[f64; 4]; 4], [f64; 4]) {
    let mut jtj = [[0.0; 4]; 4];
    let mut jtr = [0.0; 4];
    let (b, v, tau0, sigma) = (p[0], p[1], p[2], p[3]);
    for (&tau, &y) in delays.iter().zip(rates) {
        let u = tau - tau0;
        let g = (-u * u / (2.0 * sigma * sigma)).exp();
        let resid = b * (1.0 - v * g) - y;
        let grad = [
            1.0 - v * g,
            -b * g,
            -b * v * g * u / (sigma * sigma),
            -b * v * g * u * u / (sigma * sigma * sigma),
        ];
        for i in 0..4 {
            jtr[i] += grad[i] * resid;
            for j in 0..4 {
                jtj[i][j] += grad[i] * grad[j];
            }
        }
    }
    (jtj, jtr)
}

/// Solve a 4x4 system by Gaussian elimination with partial pivoting.
fn solve4(mut a: [[f64; 4]; 4], mut b: [f64; 4]) -> Option<[f64; 4]> {
    for col in 0..4 {
        let pivot = (col..4).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..4 {
            let f = a[row][col] / a[col][col];
            for k in col..4 {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 4];
    for col in (0..4).rev() {
        let mut sum = b[col];
        for k in col + 1..4 {
            sum -= a[col][k] * x[k];
        }
        x[col] = sum / a[col][col];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}
