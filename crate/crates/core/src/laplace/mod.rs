//! Laplace-domain routes: continued-fraction approximants of the closure
//! functional equations, the perturbative transforms, functional-equation
//! residuals and numerical inversion back to the time domain.

mod fraction;
mod inversion;

pub use fraction::{
    abscissa_bound, dia_approximant, functional_residual, perturbative_transform, ApproximantSpec,
    Model, Tail, POLE_THRESHOLD,
};
pub use inversion::{invert_laplace, invert_laplace_report, Inversion, InversionConfig, LaplaceFunction};
