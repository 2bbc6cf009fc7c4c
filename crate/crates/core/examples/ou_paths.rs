// Sample Ornstein–Uhlenbeck paths and check their autocorrelation.

use dia_lab::ou::{estimate_autocorrelation, generate_ou_path};
use dia_lab::{OUParams, RngSeed, TimeGrid};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let params = OUParams::new(0.5, 1.0)?;
    let grid = TimeGrid::new(50.0, 5001)?;
    let paths = (0..200)
        .map(|i| generate_ou_path(&params, &grid, RngSeed::new(2024, i)))
        .collect::<Result<Vec<_>, _>>()?;

    println!("{:>6} {:>10} {:>10} {:>10}", "tau", "estimate", "se", "exact");
    for lag in [0, 50, 100, 200, 400] {
        let est = estimate_autocorrelation(&paths, lag)?;
        let tau = grid.point(lag);
        println!(
            "{tau:>6.2} {:>10.5} {:>10.5} {:>10.5}",
            est.value,
            est.std_error,
            params.autocorrelation(tau)
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
