//! Solution routes for a non-Markovian stochastic oscillator and for a
//! coherent wave in a random medium whose refractive fluctuation is an
//! Ornstein–Uhlenbeck process.
//!
//! The same mean response can be computed by
//! Monte Carlo ensembles ([`solvers::ensemble_green_function`]),
//! a deterministic Volterra march of the closure equation
//! ([`solvers::solve_dia_volterra_model`]), continued-fraction approximants
//! inverted from the Laplace domain ([`laplace`]), and small-parameter
//! closed forms ([`closed_forms`]). [`analysis`] measures and compares them.
//!
//! ```
//! use dia_lab::{grid::TimeGrid, model::ModelParams, solvers};
//!
//! let params = ModelParams::ultra(0.04, 0.01, 0.1).unwrap();
//! let grid = TimeGrid::new(20.0, 2000).unwrap();
//! let g = solvers::solve_dia_volterra_model(&params, &grid).unwrap();
//! assert_eq!(g.values[0], 1.0);
//! ```

pub mod analysis;
pub mod cli;
pub mod closed_forms;
pub mod ensemble;
pub mod error;
pub mod grid;
pub mod laplace;
pub mod model;
pub mod ou;
pub mod series;
pub mod solvers;

pub use error::{Error, Result};
pub use grid::TimeGrid;
pub use model::{ModelParams, WaveParams};
pub use ou::{OUParams, RngSeed};
pub use series::{ComplexSeries, EnsembleStats, RealSeries};
