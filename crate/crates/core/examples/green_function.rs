// Mean Green's function of the stochastic oscillator by three routes:
// Monte Carlo, the Volterra closure march and an inverted continued fraction.

use dia_lab::analysis::compare_series;
use dia_lab::laplace::{invert_laplace, ApproximantSpec, InversionConfig, LaplaceFunction};
use dia_lab::{solvers, ModelParams, TimeGrid};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    // nu = 0.04, sigma^2 = 0.01, lambda = 0.1, infinite memory
    let params = ModelParams::ultra(0.04, 0.01, 0.1)?;
    let grid = TimeGrid::new(20.0, 1001)?;

    let mc = solvers::ensemble_green_function(&params, &grid, 2000, 7)?;
    let volterra = solvers::solve_dia_volterra_model(&params, &grid)?;
    let f = LaplaceFunction::from_approximant(ApproximantSpec::oscillator(params, 30)?)?;
    let inverted = invert_laplace(&f, &grid, &InversionConfig::default())?;

    for i in (0..grid.n_steps()).step_by(100) {
        println!(
            "t = {:5.1}  mc = {:+.5} (se {:.1e})  volterra = {:+.6}  depth 30 = {:+.6}",
            grid.point(i),
            mc.mean[i].re,
            mc.std_error_re[i],
            volterra.values[i],
            inverted.values[i]
        );
    }
    let m = compare_series(&inverted, &volterra)?;
    println!("depth 30 vs volterra: max |diff| = {:.2e}", m.max_abs);
    let m = compare_series(&mc.mean_re(), &volterra)?;
    println!("monte carlo vs volterra: rel rms = {:.3}", m.rel_rms);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
