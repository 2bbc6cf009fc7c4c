//! Fourier-series inversion of Laplace transforms on a shifted Bromwich line,
//! accelerated by Euler (binomial) averaging of the alternating tail.
//!
//! For a transform `F` analytic right of `c0` and a shift `s >= max(c0, 0)`:
//!
//! ```text
//! f(t) ~ e^{s t} e^{A/2} / t * [ Re F(s + A/2t) / 2
//!                                + sum_{k>=1} (-1)^k Re F(s + (A + 2 k pi i) / 2t) ]
//! ```
//!
//! The aliasing error is about `e^{-A}` times the size of `e^{-s t} f`, so `A`
//! is derived from the target tolerance.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{param, Error, Result};
use crate::grid::TimeGrid;
use crate::series::RealSeries;

use super::fraction::{abscissa_bound, dia_approximant, ApproximantSpec};

type TransformFn = dyn Fn(Complex64) -> Result<Complex64> + Send + Sync;

/// A Laplace-domain function with a declared abscissa of convergence.
#[derive(Clone)]
pub struct LaplaceFunction {
    f: Arc<TransformFn>,
    abscissa: f64,
}

impl std::fmt::Debug for LaplaceFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LaplaceFunction")
            .field("abscissa", &self.abscissa)
            .finish_non_exhaustive()
    }
}

impl LaplaceFunction {
    pub fn new(
        abscissa: f64,
        f: impl Fn(Complex64) -> Result<Complex64> + Send + Sync + 'static,
    ) -> Self {
        Self {
            f: Arc::new(f),
            abscissa,
        }
    }

    /// Wrap a truncated fraction; the abscissa comes from [`abscissa_bound`].
    pub fn from_approximant(spec: ApproximantSpec) -> Result<Self> {
        spec.validate()?;
        let abscissa = abscissa_bound(&spec).unwrap_or(0.0);
        Ok(Self::new(abscissa, move |p| dia_approximant(&spec, p)))
    }

    pub fn eval(&self, p: Complex64) -> Result<Complex64> {
        (self.f)(p)
    }

    pub fn abscissa(&self) -> f64 {
        self.abscissa
    }

    /// Cauchy–Riemann defect `|u_x - v_y| + |u_y + v_x|` at `p` from central
    /// differences of step `h`, relative to `|F'(p)|`.
    pub fn cauchy_riemann_defect(&self, p: Complex64, h: f64) -> Result<f64> {
        let dx = (self.eval(p + h)? - self.eval(p - h)?) / (2.0 * h);
        let i = Complex64::new(0.0, 1.0);
        let dy = (self.eval(p + i * h)? - self.eval(p - i * h)?) / (2.0 * h);
        let defect = (dx.re - dy.im).abs() + (dx.im + dy.re).abs();
        Ok(defect / (dx.norm() + 1e-300))
    }

    /// `lim p^order F(p)` along the positive real axis, with one Richardson
    /// step to cancel the `1/p` correction.
    pub fn initial_value(&self, order: i32, at: f64) -> Result<f64> {
        let v = |x: f64| -> Result<f64> { Ok((self.eval(Complex64::new(x, 0.0))? * x.powi(order)).re) };
        Ok(2.0 * v(2.0 * at)? - v(at)?)
    }
}

/// Parameters of the accelerated Fourier-series inversion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InversionConfig {
    /// Base shift of the Bromwich line; `None` uses `max(c0, 0)`.
    pub shift: Option<f64>,
    /// Initial number of series terms before Euler averaging (at least 16).
    pub series_terms: usize,
    /// Number of binomially averaged partial sums.
    pub euler_order: usize,
    /// Target absolute accuracy.
    pub tolerance: f64,
    /// Upper bound on series terms while adaptively refining.
    pub max_terms: usize,
}

impl Default for InversionConfig {
    fn default() -> Self {
        Self {
            shift: None,
            series_terms: 32,
            euler_order: 20,
            tolerance: 1e-10,
            max_terms: 1 << 14,
        }
    }
}

impl InversionConfig {
    fn validate(&self, f: &LaplaceFunction) -> Result<f64> {
        if self.series_terms < 16 {
            return Err(param("series_terms", format!("must be >= 16, got {}", self.series_terms)));
        }
        if self.max_terms < self.series_terms {
            return Err(param("max_terms", "must be >= series_terms"));
        }
        if !(self.tolerance > 0.0 && self.tolerance < 1.0) {
            return Err(param("tolerance", format!("must lie in (0, 1), got {}", self.tolerance)));
        }
        let shift = self.shift.unwrap_or(f.abscissa().max(0.0));
        if !(shift.is_finite() && shift >= f.abscissa()) {
            return Err(param(
                "shift",
                format!("Bromwich shift {shift} must not lie left of the abscissa {}", f.abscissa()),
            ));
        }
        Ok(shift)
    }

    /// Aliasing parameter `A` with `e^{-A}` a decade below the tolerance.
    fn aliasing(&self) -> f64 {
        (10.0 / self.tolerance).ln()
    }
}

/// Result of an inversion with its diagnostics.
#[derive(Debug, Clone)]
pub struct Inversion {
    pub series: RealSeries,
    /// Per-point estimate of the truncation error of the accelerated series.
    pub error_estimate: Vec<f64>,
    /// Largest imaginary part of the reconstruction (non-zero only if the
    /// transform breaks conjugate symmetry).
    pub max_imag: f64,
    pub tolerance: f64,
}

impl Inversion {
    pub fn imag_exceeds_tolerance(&self) -> bool {
        self.max_imag > self.tolerance
    }
}

struct PointValue {
    value: Complex64,
    estimate: f64,
}

fn binomial_weights(m: usize) -> Vec<f64> {
    let mut w = vec![0.0; m + 1];
    w[0] = 0.5_f64.powi(m as i32);
    for j in 1..=m {
        w[j] = w[j - 1] * (m + 1 - j) as f64 / j as f64;
    }
    w
}

fn invert_at(f: &LaplaceFunction, t: f64, shift: f64, cfg: &InversionConfig) -> Result<PointValue> {
    let a = cfg.aliasing();
    let weights = binomial_weights(cfg.euler_order);
    let scale = (shift * t + 0.5 * a).exp() / t;
    let node = |k: usize| Complex64::new(shift + a / (2.0 * t), k as f64 * std::f64::consts::PI / t);
    // symmetric term: average of F(p) and F(conj p), whose imaginary part
    // measures the conjugate-symmetry defect
    let term = |k: usize| -> Result<Complex64> {
        let p = node(k);
        let sym = 0.5 * (f.eval(p)? + f.eval(p.conj())?);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        Ok(if k == 0 { 0.5 * sym } else { sign * sym })
    };

    let mut partial = Vec::with_capacity(cfg.series_terms + cfg.euler_order + 2);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut n = cfg.series_terms;
    let mut last_estimate = f64::INFINITY;
    loop {
        while partial.len() < n + cfg.euler_order + 2 {
            sum += term(partial.len())?;
            partial.push(sum);
        }
        let euler = |start: usize| -> Complex64 {
            weights
                .iter()
                .enumerate()
                .map(|(j, w)| *w * partial[start + j])
                .sum()
        };
        let here = euler(n);
        let next = euler(n + 1);
        let estimate = scale * (here - next).norm();
        if estimate <= cfg.tolerance {
            return Ok(PointValue {
                value: scale * here,
                estimate,
            });
        }
        last_estimate = last_estimate.min(estimate);
        if 2 * n > cfg.max_terms {
            return Err(Error::Inversion {
                t,
                estimate: last_estimate,
            });
        }
        n *= 2;
    }
}

/// Numerically invert `f` on every point of `grid`.
///
/// `t = 0` is filled from the initial-value theorem `lim p F(p)`.
pub fn invert_laplace_report(
    f: &LaplaceFunction,
    grid: &TimeGrid,
    cfg: &InversionConfig,
) -> Result<Inversion> {
    let shift = cfg.validate(f)?;
    let points: Vec<PointValue> = grid
        .points()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|t| {
            if t == 0.0 {
                Ok(PointValue {
                    value: Complex64::new(f.initial_value(1, 1e6)?, 0.0),
                    estimate: 0.0,
                })
            } else {
                invert_at(f, t, shift, cfg)
            }
        })
        .collect::<Result<_>>()?;
    let max_imag = points.iter().fold(0.0_f64, |m, v| m.max(v.value.im.abs()));
    Ok(Inversion {
        series: RealSeries::new(*grid, points.iter().map(|v| v.value.re).collect())?,
        error_estimate: points.iter().map(|v| v.estimate).collect(),
        max_imag,
        tolerance: cfg.tolerance,
    })
}

/// Numerically invert `f` on `grid`, returning only the real series.
pub fn invert_laplace(f: &LaplaceFunction, grid: &TimeGrid, cfg: &InversionConfig) -> Result<RealSeries> {
    Ok(invert_laplace_report(f, grid, cfg)?.series)
}
