// Numerical inversion of an arbitrary transform with its diagnostics.

use dia_lab::laplace::{invert_laplace_report, InversionConfig, LaplaceFunction};
use dia_lab::TimeGrid;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    // 1/((p + 0.2)^2 + 1) <-> e^{-0.2 t} sin t
    let f = LaplaceFunction::new(-0.2, |p| Ok(1.0 / ((p + 0.2) * (p + 0.2) + 1.0)));
    let grid = TimeGrid::new(30.0, 31)?;
    let out = invert_laplace_report(&f, &grid, &InversionConfig::default())?;

    let mut worst = 0.0_f64;
    for ((t, v), est) in out.series.iter().zip(&out.error_estimate) {
        let exact = (-0.2 * t).exp() * t.sin();
        worst = worst.max((v - exact).abs());
        if (t as usize) % 5 == 0 {
            println!("t = {t:4.1}  {v:+.12}  exact {exact:+.12}  estimate {est:.1e}");
        }
    }
    println!("max error {worst:.2e}, max imaginary part {:.1e}", out.max_imag);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
