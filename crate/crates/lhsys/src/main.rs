use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use lhsys::cli::{run, Command, Invocation};

#[derive(Parser)]
#[command(
    name = "lhsys",
    about = "Time-dependent Lie-Hamilton systems on the b2/h4/h6 chain: \
             simulation, exact solutions, superposition rules and verification",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Integrate the configured system and write a trajectory CSV
    Simulate(CommonArgs),
    /// Evaluate the closed-form solution (b2 and h4 systems)
    Exact(CommonArgs),
    /// Reconstruct a withheld solution from particular solutions
    Superpose(CommonArgs),
    /// Track the constants of motion of simultaneous copies
    Constants(CommonArgs),
    /// Run the full verification suite and write a JSON report
    Verify(CommonArgs),
    /// Map the configured states between the charts
    Convert(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Path to the TOML run configuration
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides the config)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Compare closed forms against the integrator where applicable
    #[arg(long)]
    cross_check: bool,
    /// Seed for verification sampling (overrides the config)
    #[arg(long)]
    seed: Option<u64>,
    /// Integration tolerance (overrides the config)
    #[arg(long)]
    tol: Option<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = match cli.command {
        Cmd::Simulate(a) => (Command::Simulate, a),
        Cmd::Exact(a) => (Command::Exact, a),
        Cmd::Superpose(a) => (Command::Superpose, a),
        Cmd::Constants(a) => (Command::Constants, a),
        Cmd::Verify(a) => (Command::Verify, a),
        Cmd::Convert(a) => (Command::Convert, a),
    };
    let inv = Invocation {
        command,
        config_path: args.config,
        out_dir: args.out,
        cross_check: args.cross_check,
        seed: args.seed,
        tol: args.tol,
    };
    match run(&inv) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
