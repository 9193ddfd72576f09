//! `qauth`: bounds, simulations and reports for noise-robust quantum authentication.

mod commands;
mod config;
mod opts;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Parser, Subcommand};

use config::ConfigFile;
use opts::Opts;

#[derive(Parser)]
#[command(
    name = "qauth",
    version,
    about = "Bounds and Monte Carlo estimates for trap, threshold and Clifford authentication"
)]
struct Cli {
    /// Key-value config file; flags override its entries
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Re-evaluate the analytic fields of a JSON report and compare
    #[arg(long, value_name = "FILE")]
    check: Option<PathBuf>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the analytic bounds of a scheme
    Bounds(Wrap),
    /// Estimate the honest-noise failure probability
    SimulateCorrectness(Wrap),
    /// Estimate the harm probability of random fixed-weight attacks
    SimulateSecurity(Wrap),
    /// Worst-case attack weight search
    Sweep(Wrap),
    /// Minimal qubit counts of all three schemes for a target (epsilon, delta, p)
    Compare(Wrap),
    /// Exact harm probabilities of attack letter multisets
    Oracle(Wrap),
}

#[derive(clap::Args)]
struct Wrap {
    #[command(flatten)]
    opts: Opts,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Bounds(_) => "bounds",
            Command::SimulateCorrectness(_) => "simulate-correctness",
            Command::SimulateSecurity(_) => "simulate-security",
            Command::Sweep(_) => "sweep",
            Command::Compare(_) => "compare",
            Command::Oracle(_) => "oracle",
        }
    }

    fn opts(&self) -> &Opts {
        match self {
            Command::Bounds(w)
            | Command::SimulateCorrectness(w)
            | Command::SimulateSecurity(w)
            | Command::Sweep(w)
            | Command::Compare(w)
            | Command::Oracle(w) => &w.opts,
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    if let Some(path) = &cli.check {
        if cli.command.is_some() {
            bail!("--check takes no subcommand");
        }
        return Ok(match report::check_file(path)? {
            Ok(n) => {
                println!("check passed: {n} fields of {} re-evaluated", path.display());
                ExitCode::SUCCESS
            }
            Err(problems) => {
                for p in &problems {
                    eprintln!("mismatch: {p}");
                }
                eprintln!("check failed: {} mismatches in {}", problems.len(), path.display());
                ExitCode::FAILURE
            }
        });
    }
    let Some(command) = cli.command else {
        bail!("a subcommand is required (or --check FILE); see --help");
    };
    let mut opts = command.opts().clone();
    if let Some(path) = &cli.config {
        let file = ConfigFile::load(path)?;
        opts = opts.over(Opts::from_config_args(&file.args_for(command.name()))?)?;
    }
    if let Some(t) = opts.threads {
        if t == 0 {
            bail!("--threads (or QAUTH_THREADS) must be at least 1");
        }
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global()?;
    }
    match command {
        Command::Bounds(_) => commands::bounds(&opts),
        Command::SimulateCorrectness(_) => commands::simulate_correctness(&opts),
        Command::SimulateSecurity(_) => commands::simulate_security(&opts),
        Command::Sweep(_) => commands::sweep(&opts),
        Command::Compare(_) => commands::compare(&opts),
        Command::Oracle(_) => commands::oracle(&opts),
    }?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("qauth: error: {e:#}");
            ExitCode::from(2)
        }
    }
}
