//! Measurements on computed series: envelope fits, error metrics between
//! solution routes, and CSV emission.

mod fit;
mod metrics;
mod table;

pub use fit::{fit_damped_oscillation, fit_damped_oscillation_from, EnvelopeFit, MAX_RELATIVE_RESIDUAL};
pub use metrics::{compare_series, ErrorMetrics};
pub use table::{emit_table, format_float, write_table, Cell, Table};
