//! Closed-form small-parameter solutions and coefficient formulas.
//!
//! These are the reference catalog the numerical routes are compared with.
//! Symbols are named by role: `mu_kernel` is the memory-kernel decay rate,
//! `nu` the kernel strength (`k^2 = nu` in the second-order form), and
//! `sigma`, `lambda` the OU statistics.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ModelParams, WaveParams};
use crate::ou::OUParams;

/// Perturbative mean Green's function; oscillates without decay.
///
/// `nu/(2nu+s2) e^{-lambda t} + (nu+s2)/(2nu+s2) cos(sqrt(2nu+s2) t)`
pub fn perturbative_green(params: &ModelParams, t: f64) -> f64 {
    let (nu, s2, lambda) = (params.nu, params.sigma_sq(), params.lambda());
    let d = 2.0 * nu + s2;
    nu / d * (-lambda * t).exp() + (nu + s2) / d * (d.sqrt() * t).cos()
}

/// `limsup_{t -> inf} |G(t)|` of [`perturbative_green`].
pub fn perturbative_green_limsup(params: &ModelParams) -> f64 {
    let (nu, s2) = (params.nu, params.sigma_sq());
    (nu + s2) / (2.0 * nu + s2)
}

/// Mean Green's function from the third approximant; decays like `e^{-lambda t}`.
pub fn dia_third_green(params: &ModelParams, t: f64) -> f64 {
    let (nu, s2, lambda) = (params.nu, params.sigma_sq(), params.lambda());
    let d = 3.0 * nu + 2.0 * s2;
    let w = d.sqrt();
    (-lambda * t).exp()
        * ((2.0 * nu + s2) / d + (nu + s2) / d * (w * t).cos() + lambda / w * (w * t).sin())
}

/// Upper envelope `(1 + lambda/omega) e^{-lambda t}` of [`dia_third_green`].
pub fn dia_third_envelope(params: &ModelParams, t: f64) -> f64 {
    let w = (3.0 * params.nu + 2.0 * params.sigma_sq()).sqrt();
    (1.0 + params.lambda() / w) * (-params.lambda() * t).exp()
}

/// Amplitude convention for the wave closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum Amplitude {
    /// Unit amplitude, as the formulas are usually printed.
    Unit,
    /// Scaled by `1/k` so that `sigma = 0` gives the Green's function `sin(k xi)/k`.
    #[default]
    Normalized,
}

impl Amplitude {
    fn factor(self, k: f64) -> f64 {
        match self {
            Amplitude::Unit => 1.0,
            Amplitude::Normalized => 1.0 / k,
        }
    }
}

/// Attenuation rate of the perturbative coherent wave, `s2 lambda/(1+s2)`.
pub fn perturbative_attenuation(sigma: f64, lambda: f64) -> f64 {
    let s2 = sigma * sigma;
    s2 * lambda / (1.0 + s2)
}

/// Attenuation rate of the non-perturbative coherent wave,
/// `s2 (1+2 s2) lambda/(1 - s2 + 2 s2^2)`.
pub fn dia_attenuation(sigma: f64, lambda: f64) -> f64 {
    let s2 = sigma * sigma;
    s2 * (1.0 + 2.0 * s2) * lambda / (1.0 - s2 + 2.0 * s2 * s2)
}

/// The attenuation rate written as the perturbative rate times
/// `(1 + 3 s2 + 2 s2^2)/(1 - s2 + 2 s2^2)`.
pub fn dia_attenuation_factored(sigma: f64, lambda: f64) -> f64 {
    let s2 = sigma * sigma;
    perturbative_attenuation(sigma, lambda) * (1.0 + 3.0 * s2 + 2.0 * s2 * s2)
        / (1.0 - s2 + 2.0 * s2 * s2)
}

/// Wavenumber factor `sqrt((1 - s2)/(1 + s2))`.
pub fn perturbative_freq_factor(sigma: f64) -> f64 {
    let s2 = sigma * sigma;
    ((1.0 - s2) / (1.0 + s2)).sqrt()
}

fn dia_freq_factor_sq(sigma: f64) -> Result<f64> {
    let s2 = sigma * sigma;
    let num = 1.0 - 3.0 * s2 + 2.0 * s2 * s2;
    if num <= 0.0 {
        return Err(Error::Domain(format!(
            "1 - 3 sigma^2 + 2 sigma^4 = {num} <= 0 for sigma = {sigma}"
        )));
    }
    Ok(num / (1.0 - s2 + 2.0 * s2 * s2))
}

/// Wavenumber factor `sqrt((1 - 3 s2 + 2 s2^2)/(1 - s2 + 2 s2^2))`.
pub fn dia_freq_factor(sigma: f64) -> Result<f64> {
    dia_freq_factor_sq(sigma).map(f64::sqrt)
}

/// Change of the squared wavenumber factor between the two closures, as the
/// printed shift formula states it: `-4 s2^2 (1 - s2)/(1 - 2 s2 (1 - s2))`.
pub fn squared_shift_printed(sigma: f64) -> f64 {
    let s2 = sigma * sigma;
    -4.0 * s2 * s2 * (1.0 - s2) / (1.0 - 2.0 * s2 * (1.0 - s2))
}

/// The exact difference of the squared wavenumber factors,
/// `-4 s2^2 (1 - s2)/((1 + s2)(1 - s2 + 2 s2^2))`. Agrees with
/// [`squared_shift_printed`] to leading order `O(s2^2)` only.
pub fn squared_shift_exact(sigma: f64) -> f64 {
    let s2 = sigma * sigma;
    -4.0 * s2 * s2 * (1.0 - s2) / ((1.0 + s2) * (1.0 - s2 + 2.0 * s2 * s2))
}

/// Perturbative coherent wave `e^{-rate xi} sin(factor k xi)`.
pub fn perturbative_wave(params: &WaveParams, xi: f64, amplitude: Amplitude) -> f64 {
    let (sigma, lambda, k) = (params.ou.sigma, params.lambda(), params.k);
    amplitude.factor(k)
        * (-perturbative_attenuation(sigma, lambda) * xi).exp()
        * (perturbative_freq_factor(sigma) * k * xi).sin()
}

/// Non-perturbative coherent wave; undefined for `1/2 <= sigma^2 <= 1`.
pub fn dia_wave(params: &WaveParams, xi: f64, amplitude: Amplitude) -> Result<f64> {
    let (sigma, lambda, k) = (params.ou.sigma, params.lambda(), params.k);
    let factor = dia_freq_factor(sigma)?;
    Ok(amplitude.factor(k) * (-dia_attenuation(sigma, lambda) * xi).exp() * (factor * k * xi).sin())
}

/// The four coherent-wave coefficients side by side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AttenuationReport {
    pub sigma: f64,
    pub lambda: f64,
    pub perturbative_rate: f64,
    pub dia_rate: f64,
    pub perturbative_freq_factor: f64,
    pub dia_freq_factor: f64,
}

impl AttenuationReport {
    pub fn dia_attenuates_more(&self) -> bool {
        self.dia_rate > self.perturbative_rate
    }
}

pub fn attenuation_report(sigma: f64, lambda: f64) -> Result<AttenuationReport> {
    let report = AttenuationReport {
        sigma,
        lambda,
        perturbative_rate: perturbative_attenuation(sigma, lambda),
        dia_rate: dia_attenuation(sigma, lambda),
        perturbative_freq_factor: perturbative_freq_factor(sigma),
        dia_freq_factor: dia_freq_factor(sigma)?,
    };
    if sigma > 0.0 && sigma <= 0.5 && lambda > 0.0 && !report.dia_attenuates_more() {
        return Err(Error::Domain(format!(
            "attenuation ordering violated at sigma = {sigma}, lambda = {lambda}"
        )));
    }
    Ok(report)
}

/// Which of the three Liouville-transform approximations to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AppendixOrder {
    /// `lambda` dropped from the shifted resonance.
    First,
    /// `lambda` restored to first order.
    Second,
    /// No truncation in `lambda` before the final expansion.
    Third,
}

fn appendix_k(params: &ModelParams) -> Result<f64> {
    if params.nu == 0.0 {
        return Err(Error::Domain("k^2 = nu must be non-zero".into()));
    }
    params.validate()?;
    Ok(params.nu.sqrt())
}

/// Gaussian-envelope approximation of `<f(t)>`, the mean of the Liouville-
/// transformed variable, with `k^2 = nu`.
pub fn appendix_f_approx(params: &ModelParams, t: f64, order: AppendixOrder) -> Result<f64> {
    let k = appendix_k(params)?;
    let (s2, lambda) = (params.sigma_sq(), params.lambda());
    let k2 = k * k;
    let k4 = k2 * k2;
    let envelope = (-s2 * lambda * lambda * t * t / (32.0 * k2)).exp();
    let shift = match order {
        AppendixOrder::First => 1.0 - s2 * lambda * lambda / (16.0 * k4),
        AppendixOrder::Second => 1.0 - s2 * lambda * lambda / (16.0 * k4),
        AppendixOrder::Third => 1.0 - 3.0 * s2 * lambda * lambda / (32.0 * k4),
    };
    Ok(envelope * (shift * k * t).sin() / k)
}

/// Frequency multiplier `shift` in `sin(shift k t)` of [`appendix_f_approx`].
pub fn appendix_shift_factor(params: &ModelParams, order: AppendixOrder) -> Result<f64> {
    let k = appendix_k(params)?;
    let a = params.sigma_sq() * params.lambda().powi(2) / k.powi(4);
    Ok(match order {
        AppendixOrder::First | AppendixOrder::Second => 1.0 - a / 16.0,
        AppendixOrder::Third => 1.0 - 3.0 * a / 32.0,
    })
}

/// Mean Green's function from the first Liouville approximation combined with
/// the small-`lambda` phase average:
/// `exp(-(1 + lambda^2/4k^2) sigma^2 t^2/8) cos((1 - sigma^2 lambda^2/16k^4) k t)`.
pub fn appendix_green_first(params: &ModelParams, t: f64) -> Result<f64> {
    let k = appendix_k(params)?;
    let (s2, lambda) = (params.sigma_sq(), params.lambda());
    let phase = phase_average_closed(&params.ou, t, PhaseBranch::SmallLambda);
    let envelope = (-s2 * lambda * lambda * t * t / (32.0 * k * k)).exp();
    let shift = appendix_shift_factor(params, AppendixOrder::First)?;
    Ok(phase * envelope * (shift * k * t).cos())
}

/// Evaluation branch for the Gaussian phase average.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PhaseBranch {
    Exact,
    SmallLambda,
    LargeLambda,
}

/// `lambda t - 1 + e^{-lambda t}` without cancellation near zero.
fn integrated_correlation_shape(x: f64) -> f64 {
    if x.abs() < 1e-3 {
        x * x * (0.5 - x * (1.0 / 6.0 - x * (1.0 / 24.0 - x / 120.0)))
    } else {
        x + (-x).exp_m1()
    }
}

/// `<exp(-(i/2) int_0^t b)>` for the OU process.
///
/// Exact: `exp(-(sigma^2/4 lambda^2)(lambda t - 1 + e^{-lambda t}))`; the
/// limit branches are `exp(-sigma^2 t^2/8)` and `exp(-sigma^2 t/(4 lambda))`.
pub fn phase_average_closed(ou: &OUParams, t: f64, branch: PhaseBranch) -> f64 {
    let s2 = ou.variance();
    let lambda = ou.lambda;
    let exponent = match branch {
        PhaseBranch::SmallLambda => s2 * t * t / 8.0,
        PhaseBranch::LargeLambda => s2 * t / (4.0 * lambda),
        PhaseBranch::Exact if lambda == 0.0 => s2 * t * t / 8.0,
        PhaseBranch::Exact => s2 / (4.0 * lambda * lambda) * integrated_correlation_shape(lambda * t),
    };
    (-exponent).exp()
}

/// Coefficients of the averaged first-order system for `<f>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FirstOrderSystem {
    pub c1: f64,
    pub c2: f64,
    /// Decay rate `(sqrt(nu)/4) c2`.
    pub alpha: f64,
    /// Oscillation frequency `sqrt(nu (1 - c2^2/16 - c1/2))`; `NaN` when overdamped.
    pub beta: f64,
    pub overdamped: bool,
    /// Large-`lambda` decay `sigma^2/(4 lambda)`.
    pub large_lambda_decay: f64,
    /// Large-`lambda` frequency `sqrt(nu - sigma^2/4)` (`NaN` if `sigma^2 > 4 nu`).
    pub large_lambda_beta: f64,
    /// Small-`lambda` decay `sigma^2 lambda/(16 nu)`.
    pub small_lambda_decay: f64,
    /// Small-`lambda` frequency `sqrt(nu)`.
    pub small_lambda_beta: f64,
}

pub fn first_order_system_coeffs(params: &ModelParams) -> Result<FirstOrderSystem> {
    params.validate()?;
    let (nu, s2, lambda) = (params.nu, params.sigma_sq(), params.lambda());
    let root = nu.sqrt();
    let denom = lambda * lambda + 4.0 * nu;
    let c1 = s2 * lambda * lambda / (2.0 * nu * denom);
    let c2 = s2 * lambda / (root * denom);
    let beta_sq = nu * (1.0 - c2 * c2 / 16.0 - c1 / 2.0);
    Ok(FirstOrderSystem {
        c1,
        c2,
        alpha: root / 4.0 * c2,
        beta: if beta_sq >= 0.0 { beta_sq.sqrt() } else { f64::NAN },
        overdamped: beta_sq < 0.0,
        large_lambda_decay: if lambda > 0.0 { s2 / (4.0 * lambda) } else { f64::INFINITY },
        large_lambda_beta: (nu - s2 / 4.0).sqrt(),
        small_lambda_decay: s2 * lambda / (16.0 * nu),
        small_lambda_beta: root,
    })
}
