use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use fadecap_cli::{execute, load_config, CliError, Command};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Cmd {
    /// Ephemerality and separability of the channel.
    Classify,
    /// Finite-SNR upper bounds over the sweep.
    Bounds,
    /// Low-SNR limit of capacity / rho^2.
    Limit,
    /// Monte-Carlo mutual information of on-off FSK over the sweep.
    Simulate,
    /// Bounds, limit and simulation over the sweep.
    Sweep,
    /// Print the configuration in canonical form.
    Config,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Classify => Command::Classify,
            Cmd::Bounds => Command::Bounds,
            Cmd::Limit => Command::Limit,
            Cmd::Simulate => Command::Simulate,
            Cmd::Sweep => Command::Sweep,
            Cmd::Config => Command::Config,
        }
    }
}

/// Capacity bounds and simulations for peak-constrained Rayleigh fading channels.
///
/// Without --out the CSV goes to stdout and the report to stderr; with --out
/// the CSV goes to the file and the report to stdout.
#[derive(Debug, Parser)]
#[command(name = "fadecap", version)]
struct Args {
    #[arg(value_enum)]
    command: Cmd,
    /// JSON configuration file.
    #[arg(long, short)]
    config: PathBuf,
    /// Write the CSV table here.
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Override sim.seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override sim.workers.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    workers: Option<u64>,
}

fn run(args: Args) -> Result<(), CliError> {
    let mut cfg = load_config(&args.config)?;
    if let Some(seed) = args.seed {
        cfg.sim.seed = seed;
    }
    if let Some(w) = args.workers {
        cfg.sim.workers = Some(w as usize);
    }
    let out = execute(args.command.into(), &cfg)?;
    match (&args.out, out.csv) {
        (Some(path), Some(csv)) => {
            std::fs::write(path, csv).map_err(|source| CliError::Write {
                path: path.display().to_string(),
                source,
            })?;
            print!("{}", out.report);
        }
        (None, Some(csv)) => {
            eprint!("{}", out.report);
            print!("{csv}");
        }
        (_, None) => print!("{}", out.report),
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
