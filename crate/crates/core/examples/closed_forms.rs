// The small-parameter closed forms next to the numerical closure solution.

use dia_lab::closed_forms::{
    appendix_green_first, dia_third_green, first_order_system_coeffs, perturbative_green,
    perturbative_green_limsup, phase_average_closed, PhaseBranch,
};
use dia_lab::laplace::{invert_laplace, ApproximantSpec, InversionConfig, LaplaceFunction};
use dia_lab::{ModelParams, TimeGrid};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let params = ModelParams::ultra(0.01, 0.01, 0.01)?;
    let grid = TimeGrid::new(10.0, 11)?;
    let invert = |depth| -> Result<_, dia_lab::Error> {
        let f = LaplaceFunction::from_approximant(ApproximantSpec::oscillator(params, depth)?)?;
        invert_laplace(&f, &grid, &InversionConfig::default())
    };
    let (d2, d3) = (invert(2)?, invert(3)?);
    println!("{:>4} {:>10} {:>10} {:>10} {:>10}", "t", "pert", "depth 2", "third", "depth 3");
    for (i, t) in grid.points().enumerate() {
        println!(
            "{t:>4.0} {:>10.6} {:>10.6} {:>10.6} {:>10.6}",
            perturbative_green(&params, t),
            d2.values[i],
            dia_third_green(&params, t),
            d3.values[i]
        );
    }
    println!("perturbative form keeps oscillating: limsup {:.4}", perturbative_green_limsup(&params));

    let strong = ModelParams::ultra(1.0, 0.04, 0.05)?;
    println!("Gaussian-envelope form at t = 3: {:.6}", appendix_green_first(&strong, 3.0)?);
    let s = first_order_system_coeffs(&strong)?;
    println!("first-order system: decay {:.3e}, frequency {:.6}", s.alpha, s.beta);
    println!(
        "phase average at t = 5: exact {:.6}, small-lambda {:.6}",
        phase_average_closed(&strong.ou, 5.0, PhaseBranch::Exact),
        phase_average_closed(&strong.ou, 5.0, PhaseBranch::SmallLambda)
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
