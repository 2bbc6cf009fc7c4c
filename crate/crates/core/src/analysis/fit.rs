//! Damped-sinusoid fit `A e^{-rate t} sin(omega t + phase)`.
//!
//! The two linear coefficients are projected out for every trial
//! `(rate, omega)` and Levenberg–Marquardt runs on the remaining pair.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::series::RealSeries;

/// Fits whose RMS residual exceeds this fraction of the series RMS are rejected.
pub const MAX_RELATIVE_RESIDUAL: f64 = 0.2;

const MAX_ITERATIONS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnvelopeFit {
    pub amplitude: f64,
    pub rate: f64,
    pub omega: f64,
    /// Folded into `[0, 2 pi)`.
    pub phase: f64,
    pub rms_residual: f64,
}

impl EnvelopeFit {
    pub fn eval(&self, t: f64) -> f64 {
        self.amplitude * (-self.rate * t).exp() * (self.omega * t + self.phase).sin()
    }
}

struct Window<'a> {
    t: &'a [f64],
    y: &'a [f64],
}

impl Window<'_> {
    /// Linear coefficients `(a, b)` of `e^{-rt}(a sin wt + b cos wt)` and the residual.
    fn project(&self, rate: f64, omega: f64, residual: &mut Vec<f64>) -> (f64, f64) {
        let (mut ss, mut sc, mut cc, mut ys, mut yc) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for (&t, &y) in self.t.iter().zip(self.y) {
            let e = (-rate * t).exp();
            let (s, c) = ((omega * t).sin() * e, (omega * t).cos() * e);
            ss += s * s;
            sc += s * c;
            cc += c * c;
            ys += y * s;
            yc += y * c;
        }
        let det = ss * cc - sc * sc;
        let (a, b) = if det.abs() > 0.0 {
            ((ys * cc - yc * sc) / det, (yc * ss - ys * sc) / det)
        } else {
            (0.0, 0.0)
        };
        residual.clear();
        residual.extend(self.t.iter().zip(self.y).map(|(&t, &y)| {
            let e = (-rate * t).exp();
            y - e * (a * (omega * t).sin() + b * (omega * t).cos())
        }));
        (a, b)
    }

    fn cost(&self, rate: f64, omega: f64, scratch: &mut Vec<f64>) -> f64 {
        self.project(rate, omega, scratch);
        scratch.iter().map(|r| r * r).sum()
    }
}

fn zero_crossings(t: &[f64], y: &[f64]) -> Vec<f64> {
    let mut out = Vec::new();
    for i in 1..y.len() {
        let (a, b) = (y[i - 1], y[i]);
        if a == 0.0 && i == 1 {
            continue;
        }
        if (a < 0.0 && b >= 0.0) || (a > 0.0 && b <= 0.0) {
            if b == 0.0 {
                out.push(t[i]);
            } else {
                out.push(t[i - 1] + (t[i] - t[i - 1]) * a / (a - b));
            }
        }
    }
    out.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    out
}

/// Slope of `ln|peak|` against time, one peak per half-cycle.
fn initial_rate(t: &[f64], y: &[f64], crossings: &[f64]) -> f64 {
    let mut pts = Vec::new();
    for w in crossings.windows(2) {
        let peak = t
            .iter()
            .zip(y)
            .filter(|(&ti, _)| ti > w[0] && ti < w[1])
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()));
        if let Some((&ti, &yi)) = peak {
            if yi != 0.0 {
                pts.push((ti, yi.abs().ln()));
            }
        }
    }
    if pts.len() < 2 {
        return 0.0;
    }
    let n = pts.len() as f64;
    let mt = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let ml = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let cov: f64 = pts.iter().map(|p| (p.0 - mt) * (p.1 - ml)).sum();
    let var: f64 = pts.iter().map(|p| (p.0 - mt).powi(2)).sum();
    if var > 0.0 {
        -cov / var
    } else {
        0.0
    }
}

/// Fit a damped sinusoid, skipping the first quarter period.
pub fn fit_damped_oscillation(series: &RealSeries) -> Result<EnvelopeFit> {
    fit_damped_oscillation_from(series, None)
}

/// As [`fit_damped_oscillation`], with an explicit start of the fit window
/// (`None` skips the first quarter period estimated from zero crossings).
pub fn fit_damped_oscillation_from(series: &RealSeries, start: Option<f64>) -> Result<EnvelopeFit> {
    let t_all: Vec<f64> = series.grid.points().collect();
    let y_all = &series.values;
    if y_all.iter().any(|v| !v.is_finite()) {
        return Err(Error::Input("series contains non-finite values".into()));
    }
    let crossings = zero_crossings(&t_all, y_all);
    if crossings.len() < 5 {
        return Err(Error::Input(format!(
            "need at least 5 zero crossings, found {}",
            crossings.len()
        )));
    }
    let spacing = (crossings[crossings.len() - 1] - crossings[0]) / (crossings.len() - 1) as f64;
    let omega0 = PI / spacing;
    let t_start = start.unwrap_or(t_all[0] + FRAC_PI_2 / omega0);
    let first = t_all.partition_point(|&t| t < t_start);
    let window = Window {
        t: &t_all[first..],
        y: &y_all[first..],
    };
    if window.t.len() < 8 {
        return Err(Error::Input("fit window holds fewer than 8 points".into()));
    }
    let rate0 = initial_rate(&t_all, y_all, &crossings);

    let mut scratch = Vec::with_capacity(window.t.len());
    let mut plus = Vec::with_capacity(window.t.len());
    let mut minus = Vec::with_capacity(window.t.len());
    let mut theta = [rate0, omega0];
    let mut cost = window.cost(theta[0], theta[1], &mut scratch);
    let mut damping = 1e-3;
    let mut converged = false;
    for _ in 0..MAX_ITERATIONS {
        window.project(theta[0], theta[1], &mut scratch);
        let steps = [1e-6 * (theta[0].abs() + 1e-3 * theta[1]), 1e-7 * theta[1]];
        let mut jac = [vec![0.0; scratch.len()], vec![0.0; scratch.len()]];
        for (d, col) in jac.iter_mut().enumerate() {
            let mut hi = theta;
            let mut lo = theta;
            hi[d] += steps[d];
            lo[d] -= steps[d];
            window.project(hi[0], hi[1], &mut plus);
            window.project(lo[0], lo[1], &mut minus);
            for ((c, p), m) in col.iter_mut().zip(&plus).zip(&minus) {
                *c = (p - m) / (2.0 * steps[d]);
            }
        }
        let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
        let jtj = [
            [dot(&jac[0], &jac[0]), dot(&jac[0], &jac[1])],
            [dot(&jac[1], &jac[0]), dot(&jac[1], &jac[1])],
        ];
        let grad = [dot(&jac[0], &scratch), dot(&jac[1], &scratch)];
        let mut accepted = false;
        for _ in 0..30 {
            let a = [
                [jtj[0][0] * (1.0 + damping), jtj[0][1]],
                [jtj[1][0], jtj[1][1] * (1.0 + damping)],
            ];
            let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
            if det == 0.0 || !det.is_finite() {
                damping *= 10.0;
                continue;
            }
            // residual r = y - model, so J = d r / d theta and the step solves (J^T J) delta = -J^T r
            let delta = [
                -(a[1][1] * grad[0] - a[0][1] * grad[1]) / det,
                -(a[0][0] * grad[1] - a[1][0] * grad[0]) / det,
            ];
            let trial = [theta[0] + delta[0], theta[1] + delta[1]];
            let trial_cost = window.cost(trial[0], trial[1], &mut plus);
            if trial.iter().all(|v| v.is_finite()) && trial[1] > 0.0 && trial_cost <= cost {
                let small_step = delta[0].abs() <= 1e-12 * (theta[0].abs() + 1e-6 * theta[1])
                    && delta[1].abs() <= 1e-12 * theta[1];
                let small_gain = cost - trial_cost <= 1e-14 * cost;
                theta = trial;
                cost = trial_cost;
                damping = (damping / 3.0).max(1e-12);
                accepted = true;
                converged = small_step || small_gain;
                break;
            }
            damping *= 10.0;
        }
        if !accepted {
            // no downhill step at any damping: already at the minimum
            converged = true;
        }
        if converged {
            break;
        }
    }
    if !converged {
        return Err(Error::Fit(format!(
            "no convergence after {MAX_ITERATIONS} iterations (rate {}, omega {})",
            theta[0], theta[1]
        )));
    }

    let (a, b) = window.project(theta[0], theta[1], &mut scratch);
    let n = window.t.len() as f64;
    let rms_residual = (cost / n).sqrt();
    let series_rms = (window.y.iter().map(|y| y * y).sum::<f64>() / n).sqrt();
    if rms_residual > MAX_RELATIVE_RESIDUAL * series_rms {
        return Err(Error::Fit(format!(
            "residual {rms_residual:e} exceeds {MAX_RELATIVE_RESIDUAL} of series RMS {series_rms:e} \
             (rate {}, omega {})",
            theta[0], theta[1]
        )));
    }
    let mut rate = theta[0];
    if rate < 0.0 {
        if -rate <= 1e-6 * theta[1] {
            rate = 0.0;
        } else {
            return Err(Error::Fit(format!("growing oscillation (rate {rate})")));
        }
    }
    Ok(EnvelopeFit {
        amplitude: a.hypot(b),
        rate,
        omega: theta[1],
        phase: b.atan2(a).rem_euclid(TAU),
        rms_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::TimeGrid;

    fn grid() -> TimeGrid {
        TimeGrid::with_spacing(20.0, 0.01).unwrap()
    }

    #[test]
    fn damped_synthetic() {
        let s = RealSeries::from_fn(grid(), |t| (-0.3 * t).exp() * (2.0 * t).sin());
        let f = fit_damped_oscillation(&s).unwrap();
        assert!((f.rate - 0.3).abs() < 3e-3, "{f:?}");
        assert!((f.omega - 2.0).abs() < 2e-3, "{f:?}");
        assert!((f.amplitude - 1.0).abs() < 1e-6);
        assert!(f.phase.abs() < 1e-6 || (f.phase - TAU).abs() < 1e-6);
    }

    #[test]
    fn undamped_synthetic() {
        let s = RealSeries::from_fn(grid(), |t| (5.0 * t).sin());
        let f = fit_damped_oscillation(&s).unwrap();
        assert!(f.rate.abs() < 1e-3, "{f:?}");
        assert!((f.omega - 5.0).abs() < 1e-6);
    }

    #[test]
    fn phase_is_folded() {
        let s = RealSeries::from_fn(grid(), |t| -0.5 * (-0.1 * t).exp() * (3.0 * t + 1.0).sin());
        let f = fit_damped_oscillation(&s).unwrap();
        assert!(f.amplitude > 0.0 && f.omega > 0.0);
        assert!((f.phase - (1.0 + PI)).abs() < 1e-6, "{f:?}");
    }

    #[test]
    fn too_few_crossings() {
        let s = RealSeries::from_fn(grid(), |t| (0.2 * t).sin());
        assert!(matches!(fit_damped_oscillation(&s), Err(Error::Input(_))));
    }

    #[test]
    fn bad_shape_is_rejected() {
        // a beat of two unrelated tones is not one damped sinusoid
        let s = RealSeries::from_fn(grid(), |t| (3.0 * t).sin() + (4.1 * t).sin());
        assert!(matches!(fit_damped_oscillation(&s), Err(Error::Fit(_))));
    }
}
