// Fit a damped sinusoid and emit the data as CSV.

use dia_lab::analysis::{emit_table, fit_damped_oscillation, Cell, Table};
use dia_lab::{RealSeries, TimeGrid};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let grid = TimeGrid::new(20.0, 2001)?;
    let series = RealSeries::from_fn(grid, |t| 1.5 * (-0.3 * t).exp() * (2.0 * t + 0.4).sin());
    let fit = fit_damped_oscillation(&series)?;
    println!(
        "amplitude {:.6}  rate {:.6}  omega {:.6}  phase {:.6}  residual {:.1e}",
        fit.amplitude, fit.rate, fit.omega, fit.phase, fit.rms_residual
    );

    let mut table = Table::new(["t", "data", "fit"]);
    for (t, v) in series.iter().step_by(400) {
        table.push(vec![Cell::from(t), Cell::from(v), Cell::from(fit.eval(t))]);
    }
    emit_table(&table, std::io::stdout().lock())?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
