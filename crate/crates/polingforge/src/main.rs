//! Command-line entry point: `polingforge <command> --spec <path>`.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use polingforge::pipeline::{self, RunRequest};
use polingforge::runspec::CommandKind;

#[derive(Parser)]
#[command(
    name = "polingforge",
    version,
    about = "Aperiodic poling design for quasi-phase-matched crystals"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print domain width, domain count, and height bounds for a target sketch
    Suggest(RunArgs),
    /// Anneal a poling configuration toward a target phase-matching curve
    Design(RunArgs),
    /// Score an existing poling configuration against a target
    Evaluate(RunArgs),
    /// Compute the joint spectral amplitude and its Schmidt spectrum
    Jsa(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Run spec (JSON)
    #[arg(long)]
    spec: PathBuf,
    /// Output directory (defaults to the spec's `output`, then to `.`)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Cap on restart parallelism
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// RNG seed override (design only)
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = match cli.command {
        Command::Suggest(args) => (CommandKind::Suggest, args),
        Command::Design(args) => (CommandKind::Design, args),
        Command::Evaluate(args) => (CommandKind::Evaluate, args),
        Command::Jsa(args) => (CommandKind::Jsa, args),
    };
    let request = RunRequest {
        command,
        spec: args.spec,
        out: args.out,
        threads: args.threads.max(1),
        seed: args.seed,
    };
    match pipeline::run(&request) {
        Ok(_) => ExitCode::SUCCESS,
        Err(error) => {
            eprintln!("error: {error}");
            ExitCode::FAILURE
        }
    }
}
