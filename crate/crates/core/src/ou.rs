//! Exact sampling of the stationary Ornstein–Uhlenbeck coefficient process.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::ensemble;
use crate::error::{ensure_finite, param, Error, Result};
use crate::grid::TimeGrid;
use crate::series::EnsembleStats;

/// Stationary OU statistics: `<b(t) b(t')> = sigma^2 exp(-lambda |t - t'|)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OUParams {
    pub sigma: f64,
    pub lambda: f64,
}

impl OUParams {
    pub fn new(sigma: f64, lambda: f64) -> Result<Self> {
        let p = Self { sigma, lambda };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_finite("sigma", self.sigma)?;
        ensure_finite("lambda", self.lambda)?;
        if self.sigma < 0.0 {
            return Err(param("sigma", format!("must be >= 0, got {}", self.sigma)));
        }
        if self.lambda <= 0.0 {
            return Err(param("lambda", format!("must be > 0, got {}", self.lambda)));
        }
        Ok(())
    }

    /// `sigma^2`.
    pub fn variance(&self) -> f64 {
        self.sigma * self.sigma
    }

    /// Model autocorrelation at lag `tau`.
    pub fn autocorrelation(&self, tau: f64) -> f64 {
        self.variance() * (-self.lambda * tau.abs()).exp()
    }
}

/// A (seed, stream) pair; fully determines one sampled path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngSeed {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngSeed {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }
}

/// One realization of the OU process on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct OUPath {
    pub grid: TimeGrid,
    pub values: Vec<f64>,
}

/// Sample a stationary path with the exact one-step transition
/// `b[n+1] = b[n] e^{-lambda dt} + sigma sqrt(1 - e^{-2 lambda dt}) z[n]`.
pub fn generate_ou_path(params: &OUParams, grid: &TimeGrid, seed: RngSeed) -> Result<OUPath> {
    params.validate()?;
    let n = grid.n_steps();
    let mut values = Vec::with_capacity(n);
    if params.sigma == 0.0 {
        values.resize(n, 0.0);
        return Ok(OUPath { grid: *grid, values });
    }
    let mut rng = seed.rng();
    let decay = (-params.lambda * grid.dt()).exp();
    // 1 - e^{-2 lambda dt} without cancellation for small lambda dt
    let kick = params.sigma * (-(-2.0 * params.lambda * grid.dt()).exp_m1()).sqrt();
    let mut b = params.sigma * rng.sample::<f64, _>(StandardNormal);
    values.push(b);
    for _ in 1..n {
        b = b * decay + kick * rng.sample::<f64, _>(StandardNormal);
        values.push(b);
    }
    Ok(OUPath { grid: *grid, values })
}

/// A scalar estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
}

/// Ensemble-and-time average of `b(t) b(t + lag)`.
///
/// Each path contributes its own time average; the standard error is taken
/// across paths, which are independent.
pub fn estimate_autocorrelation(paths: &[OUPath], lag_index: usize) -> Result<Estimate> {
    let first = paths
        .first()
        .ok_or_else(|| Error::Input("no paths supplied".into()))?;
    let n = first.grid.n_steps();
    if lag_index >= n {
        return Err(Error::Input(format!("lag index {lag_index} >= {n} grid points")));
    }
    if paths.iter().any(|p| p.grid != first.grid || p.values.len() != n) {
        return Err(Error::Input("paths do not share a grid".into()));
    }
    let per_path: Vec<f64> = paths
        .iter()
        .map(|p| {
            let m = n - lag_index;
            let sum: f64 = p.values[..m]
                .iter()
                .zip(&p.values[lag_index..])
                .map(|(a, b)| a * b)
                .sum();
            sum / m as f64
        })
        .collect();
    Ok(mean_and_se(&per_path))
}

pub(crate) fn mean_and_se(xs: &[f64]) -> Estimate {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let std_error = if xs.len() > 1 {
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (var / n).sqrt()
    } else {
        0.0
    };
    Estimate {
        value: mean,
        std_error,
    }
}

/// Monte Carlo estimate of `<exp(-(i/2) int_0^t b)>` on every grid point.
///
/// The running integral uses the trapezoid rule on the path grid. Sample `i`
/// is drawn from stream `i` of `seed`.
pub fn monte_carlo_phase_average(
    params: &OUParams,
    grid: &TimeGrid,
    n_samples: u64,
    seed: u64,
) -> Result<EnsembleStats> {
    params.validate()?;
    let half_dt = 0.5 * grid.dt();
    ensemble::run(*grid, n_samples, |i| {
        let path = generate_ou_path(params, grid, RngSeed::new(seed, i))?;
        let mut integral = 0.0;
        let mut out = Vec::with_capacity(path.values.len());
        out.push(Complex64::new(1.0, 0.0));
        for w in path.values.windows(2) {
            integral += half_dt * (w[0] + w[1]);
            out.push(Complex64::from_polar(1.0, -0.5 * integral));
        }
        Ok(out)
    })
}
