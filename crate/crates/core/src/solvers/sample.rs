use num_complex::Complex64;

use crate::ensemble;
use crate::error::{Error, Result};
use crate::grid::TimeGrid;
use crate::model::{ModelParams, WaveParams};
use crate::ou::{generate_ou_path, OUPath, RngSeed};
use crate::series::{ComplexSeries, EnsembleStats, RealSeries};

/// Any state component above this magnitude aborts the integration.
pub const DIVERGENCE_THRESHOLD: f64 = 1e12;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn check_path(path: &OUPath, grid: &TimeGrid) -> Result<()> {
    let fine = grid.refined();
    if path.grid != fine || path.values.len() != fine.n_steps() {
        return Err(Error::Input(format!(
            "path must live on the half-step grid ({} points over {}), got {} points over {}",
            fine.n_steps(),
            fine.t_max(),
            path.values.len(),
            path.grid.t_max()
        )));
    }
    Ok(())
}

fn guard(step: usize, magnitude: f64) -> Result<()> {
    if magnitude.is_finite() && magnitude <= DIVERGENCE_THRESHOLD {
        Ok(())
    } else {
        Err(Error::Divergence { step, magnitude })
    }
}

/// Classical RK4 on `(G, z)` where `z = int_0^t Gamma(t - s) G(s) ds`:
/// `G' = -i b G - z + forcing(t)`, `z' = -mu z + nu G`.
fn integrate_oscillator(
    params: &ModelParams,
    path: &OUPath,
    grid: &TimeGrid,
    initial: Complex64,
    forcing: impl Fn(f64) -> f64,
) -> Result<ComplexSeries> {
    params.validate()?;
    check_path(path, grid)?;
    let h = grid.dt();
    let (nu, mu) = (params.nu, params.mu_kernel);
    let rhs = |t: f64, b: f64, g: Complex64, z: Complex64| {
        (-I * b * g - z + forcing(t), -mu * z + nu * g)
    };
    let b = &path.values;
    let mut g = initial;
    let mut z = Complex64::new(0.0, 0.0);
    let mut out = Vec::with_capacity(grid.n_steps());
    out.push(g);
    for n in 0..grid.n_steps() - 1 {
        let t = grid.point(n);
        let (b0, bh, b1) = (b[2 * n], b[2 * n + 1], b[2 * n + 2]);
        let (k1g, k1z) = rhs(t, b0, g, z);
        let (k2g, k2z) = rhs(t + 0.5 * h, bh, g + 0.5 * h * k1g, z + 0.5 * h * k1z);
        let (k3g, k3z) = rhs(t + 0.5 * h, bh, g + 0.5 * h * k2g, z + 0.5 * h * k2z);
        let (k4g, k4z) = rhs(t + h, b1, g + h * k3g, z + h * k3z);
        g += h / 6.0 * (k1g + 2.0 * k2g + 2.0 * k3g + k4g);
        z += h / 6.0 * (k1z + 2.0 * k2z + 2.0 * k3z + k4z);
        guard(n + 1, g.norm().max(z.norm()))?;
        out.push(g);
    }
    ComplexSeries::new(*grid, out)
}

/// One realization of the oscillator response to a unit impulse.
///
/// The impulse becomes the initial value `G(0+) = 1`. `path` must be sampled on
/// `grid.refined()` so that every RK4 midpoint sees an exact OU value.
pub fn solve_model_sample(
    params: &ModelParams,
    path: &OUPath,
    grid: &TimeGrid,
) -> Result<ComplexSeries> {
    integrate_oscillator(params, path, grid, Complex64::new(1.0, 0.0), |_| 0.0)
}

/// Same system started from rest and driven by an explicit forcing term.
pub fn solve_model_forced(
    params: &ModelParams,
    path: &OUPath,
    grid: &TimeGrid,
    forcing: impl Fn(f64) -> f64,
) -> Result<ComplexSeries> {
    integrate_oscillator(params, path, grid, Complex64::new(0.0, 0.0), forcing)
}

/// One realization of `E'' = -k^2 (1 + mu(xi)) E` with `E(0) = 0, E'(0) = 1`.
pub fn solve_wave_sample(params: &WaveParams, path: &OUPath, grid: &TimeGrid) -> Result<RealSeries> {
    params.validate()?;
    check_path(path, grid)?;
    let h = grid.dt();
    let k2 = params.k * params.k;
    let m = &path.values;
    let acc = |mu: f64, e: f64| -k2 * (1.0 + mu) * e;
    let (mut e, mut v) = (0.0_f64, 1.0_f64);
    let mut out = Vec::with_capacity(grid.n_steps());
    out.push(e);
    for n in 0..grid.n_steps() - 1 {
        let (m0, mh, m1) = (m[2 * n], m[2 * n + 1], m[2 * n + 2]);
        let (k1e, k1v) = (v, acc(m0, e));
        let (k2e, k2v) = (v + 0.5 * h * k1v, acc(mh, e + 0.5 * h * k1e));
        let (k3e, k3v) = (v + 0.5 * h * k2v, acc(mh, e + 0.5 * h * k2e));
        let (k4e, k4v) = (v + h * k3v, acc(m1, e + h * k3e));
        e += h / 6.0 * (k1e + 2.0 * k2e + 2.0 * k3e + k4e);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        guard(n + 1, e.abs().max(v.abs()))?;
        out.push(e);
    }
    RealSeries::new(*grid, out)
}

/// Monte Carlo estimate of the mean Green's function `<G(t)>`.
///
/// Sample `i` integrates the path drawn from stream `i` of `seed`.
pub fn ensemble_green_function(
    params: &ModelParams,
    grid: &TimeGrid,
    n_samples: u64,
    seed: u64,
) -> Result<EnsembleStats> {
    if n_samples < 2 {
        return Err(Error::Input(format!("need at least 2 samples, got {n_samples}")));
    }
    params.validate()?;
    params.ou.validate()?;
    let fine = grid.refined();
    ensemble::run(*grid, n_samples, |i| {
        let path = generate_ou_path(&params.ou, &fine, RngSeed::new(seed, i))?;
        Ok(solve_model_sample(params, &path, grid)?.values)
    })
}

/// Monte Carlo estimate of the coherent field `<E(xi)>`.
pub fn ensemble_wave_field(
    params: &WaveParams,
    grid: &TimeGrid,
    n_samples: u64,
    seed: u64,
) -> Result<EnsembleStats> {
    if n_samples < 2 {
        return Err(Error::Input(format!("need at least 2 samples, got {n_samples}")));
    }
    params.validate()?;
    params.ou.validate()?;
    let fine = grid.refined();
    ensemble::run(*grid, n_samples, |i| {
        let path = generate_ou_path(&params.ou, &fine, RngSeed::new(seed, i))?;
        let e = solve_wave_sample(params, &path, grid)?;
        Ok(e.values.into_iter().map(|x| Complex64::new(x, 0.0)).collect())
    })
}
