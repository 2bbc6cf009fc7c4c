// Truncated continued fractions: convergence with depth, the functional
// equation residual and the location of the rightmost pole.

use dia_lab::laplace::{abscissa_bound, dia_approximant, functional_residual, perturbative_transform, ApproximantSpec, Tail};
use dia_lab::ModelParams;
use num_complex::Complex64;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let params = ModelParams::ultra(0.04, 0.01, 0.1)?;
    let p = Complex64::new(0.3, 0.5);

    let two = ApproximantSpec::oscillator(params, 2)?;
    println!(
        "depth 2 = {:.12}, perturbative = {:.12}",
        dia_approximant(&two, p)?,
        perturbative_transform(&two.model, p)?
    );

    println!("{:>5} {:>28} {:>10} {:>10}", "depth", "G(p)", "residual", "pole re");
    for depth in [1, 2, 3, 5, 10, 30] {
        let spec = ApproximantSpec::oscillator(params, depth)?;
        let g = dia_approximant(&spec, p)?;
        let r = functional_residual(&spec, p)?.norm();
        let pole = abscissa_bound(&spec).map_or("none".to_owned(), |x| format!("{x:.4}"));
        println!("{depth:>5} {g:>28.10} {r:>10.2e} {pole:>10}");
    }

    let closed = ApproximantSpec::oscillator(params, 5)?.with_tail(Tail::FixedPoint);
    println!("depth 5 with fixed-point tail: residual {:.2e}", functional_residual(&closed, p)?.norm());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
