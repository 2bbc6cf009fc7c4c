//! Deterministic solution of the closure equations in integro-differential form.
//!
//! Oscillator: `G' + int_0^t Gamma(t-s) G(s) ds + sigma^2 int_0^t e^{-lambda s} G(s) G(t-s) ds = 0`,
//! `G(0) = 1`.
//!
//! Wave: `E'' + k^2 E - sigma^2 k^4 int_0^xi e^{-lambda s} E(s) E(xi-s) ds = 0`,
//! `E(0) = 0`, `E'(0) = 1`.
//!
//! Both march with the trapezoid rule for the derivative and trapezoid product
//! weights for the convolutions. The unknown at the new step enters linearly,
//! so every step is solved in closed form.

use crate::error::{Error, Result};
use crate::grid::TimeGrid;
use crate::model::{ModelParams, WaveParams};
use crate::series::RealSeries;

use super::sample::DIVERGENCE_THRESHOLD;

/// Accuracy control for the Volterra marches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VolterraConfig {
    /// Largest accepted Richardson estimate of the absolute error, from a
    /// comparison against the same march at twice the step.
    pub tolerance: f64,
}

impl Default for VolterraConfig {
    fn default() -> Self {
        Self { tolerance: 1e-4 }
    }
}

/// Sum `sum_{i=1}^{m-1} w[i] x[i] x[m-i]` using symmetry of the product.
fn interior_convolution(w: &[f64], x: &[f64], m: usize) -> f64 {
    let mut s = 0.0;
    let mut i = 1;
    let mut j = m - 1;
    while i < j {
        s += (w[i] + w[j]) * x[i] * x[j];
        i += 1;
        j -= 1;
    }
    if i == j {
        s += w[i] * x[i] * x[i];
    }
    s
}

fn check_state(step: usize, values: &[f64]) -> Result<()> {
    let magnitude = values.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    if magnitude.is_finite() && magnitude <= DIVERGENCE_THRESHOLD {
        Ok(())
    } else {
        Err(Error::Divergence { step, magnitude })
    }
}

/// Raw second-order march of the oscillator closure equation.
pub fn march_dia_model(params: &ModelParams, grid: &TimeGrid) -> Result<RealSeries> {
    params.validate()?;
    let n = grid.n_steps();
    let h = grid.dt();
    let (nu, mu, s2, lambda) = (params.nu, params.mu_kernel, params.sigma_sq(), params.lambda());
    let w: Vec<f64> = (0..n).map(|i| (-lambda * h * i as f64).exp()).collect();
    let kernel_decay = (-mu * h).exp();

    let mut g = vec![0.0; n];
    g[0] = 1.0;
    let mut z = 0.0; // memory integral int_0^t Gamma(t-s) G(s) ds
    let mut deriv = 0.0; // G'(0) = 0
    for m in 1..n {
        let z_known = kernel_decay * (z + 0.5 * h * nu * g[m - 1]);
        let z_coef = 0.5 * h * nu;
        let (c_known, c_coef) = if s2 > 0.0 {
            (
                h * interior_convolution(&w, &g, m),
                0.5 * h * g[0] * (1.0 + w[m]),
            )
        } else {
            (0.0, 0.0)
        };
        // G_m = G_{m-1} + h/2 (G'_{m-1} + G'_m), G'_m = -(z_known + z_coef G_m) - s2 (c_known + c_coef G_m)
        let rhs = g[m - 1] + 0.5 * h * (deriv - z_known - s2 * c_known);
        let lhs = 1.0 + 0.5 * h * (z_coef + s2 * c_coef);
        g[m] = rhs / lhs;
        z = z_known + z_coef * g[m];
        deriv = -z - s2 * (c_known + c_coef * g[m]);
        check_state(m, &[g[m], deriv])?;
    }
    RealSeries::new(*grid, g)
}

/// Raw second-order march of the wave closure equation.
pub fn march_dia_wave(params: &WaveParams, grid: &TimeGrid) -> Result<RealSeries> {
    params.validate()?;
    let n = grid.n_steps();
    let h = grid.dt();
    let k2 = params.k * params.k;
    let coupling = params.coupling();
    let w: Vec<f64> = (0..n).map(|i| (-params.lambda() * h * i as f64).exp()).collect();

    let mut e = vec![0.0; n];
    let mut v = 1.0;
    let mut acc = 0.0;
    for m in 1..n {
        // E(0) = 0 removes both end-point terms of the trapezoid convolution
        let conv = if coupling > 0.0 {
            h * interior_convolution(&w, &e, m)
        } else {
            0.0
        };
        let e_new = (e[m - 1] + h * v + 0.25 * h * h * (acc + coupling * conv))
            / (1.0 + 0.25 * h * h * k2);
        let acc_new = -k2 * e_new + coupling * conv;
        v += 0.5 * h * (acc + acc_new);
        e[m] = e_new;
        acc = acc_new;
        check_state(m, &[e_new, v])?;
    }
    RealSeries::new(*grid, e)
}

fn with_error_estimate(
    grid: &TimeGrid,
    cfg: &VolterraConfig,
    march: impl Fn(&TimeGrid) -> Result<RealSeries>,
) -> Result<RealSeries> {
    let fine = march(grid)?;
    let estimate = match grid.coarsened() {
        Some(coarse_grid) => {
            let coarse = march(&coarse_grid)?;
            max_gap(fine.values.iter().step_by(2), &coarse.values)
        }
        None => {
            let finer = march(&grid.refined())?;
            max_gap(finer.values.iter().step_by(2), &fine.values)
        }
    } / 3.0;
    if estimate > cfg.tolerance {
        return Err(Error::Accuracy {
            estimate,
            tolerance: cfg.tolerance,
        });
    }
    Ok(fine)
}

fn max_gap<'a>(a: impl Iterator<Item = &'a f64>, b: &[f64]) -> f64 {
    a.zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// Oscillator closure solution with the default accuracy check.
pub fn solve_dia_volterra_model(params: &ModelParams, grid: &TimeGrid) -> Result<RealSeries> {
    solve_dia_volterra_model_with(params, grid, &VolterraConfig::default())
}

pub fn solve_dia_volterra_model_with(
    params: &ModelParams,
    grid: &TimeGrid,
    cfg: &VolterraConfig,
) -> Result<RealSeries> {
    with_error_estimate(grid, cfg, |g| march_dia_model(params, g))
}

/// Wave closure solution with the default accuracy check.
pub fn solve_dia_volterra_wave(params: &WaveParams, grid: &TimeGrid) -> Result<RealSeries> {
    solve_dia_volterra_wave_with(params, grid, &VolterraConfig::default())
}

pub fn solve_dia_volterra_wave_with(
    params: &WaveParams,
    grid: &TimeGrid,
    cfg: &VolterraConfig,
) -> Result<RealSeries> {
    with_error_estimate(grid, cfg, |g| march_dia_wave(params, g))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interior_convolution_matches_naive() {
        let x: Vec<f64> = (0..12).map(|i| (i as f64 * 0.37).sin()).collect();
        let w: Vec<f64> = (0..12).map(|i| (-0.1 * i as f64).exp()).collect();
        for m in 1..12 {
            let naive: f64 = (1..m).map(|i| w[i] * x[i] * x[m - i]).sum();
            assert!((interior_convolution(&w, &x, m) - naive).abs() < 1e-14);
        }
    }

    #[test]
    fn initial_values() {
        let params = ModelParams::ultra(0.04, 0.01, 0.1).unwrap();
        let grid = TimeGrid::new(1.0, 1001).unwrap();
        let g = march_dia_model(&params, &grid).unwrap();
        assert_eq!(g.values[0], 1.0);
        // G'(0+) = 0: the first step moves by O(h^2)
        assert!((g.values[1] - 1.0).abs() < 1e-6);

        let wave = WaveParams::new(2.0, 0.1, 0.1).unwrap();
        let e = march_dia_wave(&wave, &grid).unwrap();
        assert_eq!(e.values[0], 0.0);
        assert!((e.values[1] / grid.dt() - 1.0).abs() < 1e-5);
    }

    #[test]
    fn coarse_step_is_rejected() {
        let params = WaveParams::new(10.0, 0.1, 0.05).unwrap();
        let grid = TimeGrid::new(4.0, 41).unwrap();
        assert!(matches!(
            solve_dia_volterra_wave(&params, &grid),
            Err(Error::Accuracy { .. })
        ));
    }
}
