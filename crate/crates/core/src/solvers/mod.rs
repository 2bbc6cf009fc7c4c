//! Time-domain solution routes: per-realization integration of the
//! stochastic equations, their ensemble averages, and the deterministic
//! Volterra form of the closure equations.

mod sample;
mod volterra;

pub use sample::{
    ensemble_green_function, ensemble_wave_field, solve_model_forced, solve_model_sample,
    solve_wave_sample, DIVERGENCE_THRESHOLD,
};
pub use volterra::{
    march_dia_model, march_dia_wave, solve_dia_volterra_model, solve_dia_volterra_model_with,
    solve_dia_volterra_wave, solve_dia_volterra_wave_with, VolterraConfig,
};
