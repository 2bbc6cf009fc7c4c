//! Command-line front end: `ou`, `green`, `wave` and `residual`.
//!
//! Each command reads an optional TOML file, applies flag overrides, writes
//! the effective `config.toml`, CSV tables and `summary.txt` to the output
//! directory. Exit codes: 0 success, 1 runtime failure, 2 invalid config.

mod commands;
mod config;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use commands::{cmd_green, cmd_ou, cmd_residual, cmd_wave};
pub use config::{
    InversionSection, OscillatorSection, OuSection, ResidualSection, RunConfig, VolterraSection, WaveSection,
};

use crate::error::Error;

#[derive(Debug, Parser)]
#[command(name = "dia-lab", version, about = "Mean-response solvers for stochastic oscillators and random-medium waves")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// TOML configuration file.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_name = "N")]
    pub seed: Option<u64>,
    /// Monte Carlo sample count.
    #[arg(long, global = true, value_name = "N")]
    pub samples: Option<u64>,
    /// Continued-fraction depths, comma separated.
    #[arg(long, global = true, value_name = "LIST", value_delimiter = ',')]
    pub depths: Option<Vec<usize>>,
    /// Worker threads (defaults to all cores; results do not depend on it).
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,
    /// Do not print the summary.
    #[arg(long, global = true)]
    pub quiet: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Sample OU paths and tabulate their autocorrelation.
    Ou,
    /// Mean Green's function of the oscillator by every route.
    Green,
    /// Coherent wave in a random medium by every route.
    Wave,
    /// Functional-equation residual against approximant depth.
    Residual,
}

impl Cli {
    /// Merge the config file (or defaults) with flag overrides.
    pub fn resolve(&self) -> crate::Result<RunConfig> {
        let mut config = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        if let Some(out) = &self.out {
            config.out = out.clone();
        }
        if let Some(seed) = self.seed {
            config.seed = seed;
        }
        if let Some(samples) = self.samples {
            config.samples = samples;
        }
        if let Some(depths) = &self.depths {
            config.depths = depths.clone();
        }
        config.validate()?;
        Ok(config)
    }
}

pub fn execute(command: Command, config: &RunConfig) -> crate::Result<String> {
    match command {
        Command::Ou => cmd_ou(config),
        Command::Green => cmd_green(config),
        Command::Wave => cmd_wave(config),
        Command::Residual => cmd_residual(config),
    }
}

/// Parse `args`, run the command and return the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let config = match cli.resolve() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let outcome = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| execute(cli.command, &config)),
            Err(e) => {
                eprintln!("error: cannot start {n} worker threads: {e}");
                return 1;
            }
        },
        None => execute(cli.command, &config),
    };
    match outcome {
        Ok(summary) => {
            if !cli.quiet {
                print!("{summary}");
            }
            0
        }
        Err(e @ (Error::Config { .. } | Error::Parameter { .. })) => {
            eprintln!("error: {e}");
            2
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
