// Drive the command pipeline from code with an edited configuration.

use dia_lab::cli::{execute, Command, RunConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("dia-lab-run-config-example");
    let mut config = RunConfig::parse("samples = 100\ndepths = [2, 3, 10]\n")?;
    config.out = dir.clone();
    config.oscillator.n_steps = 401;
    config.validate()?;

    print!("{}", execute(Command::Residual, &config)?);
    println!("effective config written to {}", dir.join("config.toml").display());
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
