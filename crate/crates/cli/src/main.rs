//! `semilinear`: runs configured experiments and writes CSV reports.

mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::Failure;

#[derive(Parser)]
#[command(name = "semilinear", version, about = "Experiments for the semilinear heat equation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Experiment config (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Output directory, created if missing.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Worker threads (defaults to one per core).
    #[arg(long)]
    threads: Option<usize>,
    /// Overrides the config's `seed`.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Regime verdict from exponents and profile conditions.
    Classify(Common),
    /// Monotone Picard solve; writes trajectory.csv.
    Solve(Common),
    /// Local existence horizon from the comparison ODE.
    Horizon(Common),
    /// Growth of the non-existence witness functional.
    Witness(Common),
    /// Numerical kernel axiom checks.
    VerifyKernel(Common),
    /// Harnack-type inequalities on seeded random data.
    Harnack(Common),
    /// Weighted integral finiteness and moment bounds.
    Integrals(Common),
    /// Hölder exponent of a computed solution.
    Holder(Common),
    /// Witness growth exponent and verdict across exponents p.
    FujitaScan(Common),
}

fn run(cli: Cli) -> Result<(), Failure> {
    let (common, runner): (&Common, fn(&config::Plan, &std::path::Path) -> Result<(), Failure>) = match &cli.command {
        Command::Classify(c) => (c, commands::classify),
        Command::Solve(c) => (c, commands::solve),
        Command::Horizon(c) => (c, commands::horizon),
        Command::Witness(c) => (c, commands::witness),
        Command::VerifyKernel(c) => (c, commands::verify_kernel),
        Command::Harnack(c) => (c, commands::harnack),
        Command::Integrals(c) => (c, commands::integrals),
        Command::Holder(c) => (c, commands::holder),
        Command::FujitaScan(c) => (c, commands::fujita_scan),
    };
    if let Some(n) = common.threads {
        if n == 0 {
            return Err(Failure::Config("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Config(format!("thread pool: {e}")))?;
    }
    let plan = config::load(&common.config, common.seed).map_err(|e| Failure::Config(e.0))?;
    std::fs::create_dir_all(&common.out)
        .map_err(|e| Failure::Config(format!("cannot create {}: {e}", common.out.display())))?;
    runner(&plan, &common.out)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.exit_code() as u8)
        }
    }
}
