use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use netslice_cli::{cmd_compare, cmd_run, cmd_stability, cmd_validate, Check};

/// Network slicing design checker and NSMF simulator.
#[derive(Debug, Parser)]
#[command(name = "netslice", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the averaged simulation and write its mean trace as CSV.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Overrides the config's base seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Compare FCFS against the heuristic on identical seeds.
    Compare {
        #[arg(long)]
        config: PathBuf,
        /// Also write fcfs.csv and heuristic.csv into this directory.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Print the necessary stability conditions for a config.
    Stability {
        #[arg(long)]
        config: PathBuf,
        /// Exit with status 3 when any condition is violated.
        #[arg(long)]
        strict: bool,
    },
    /// Check a triples file against the hard-slicing conditions.
    Validate {
        #[arg(long)]
        triples: PathBuf,
        #[arg(long)]
        n1: u32,
        #[arg(long)]
        n2: u32,
        /// Checks that decide the exit status (default: all).
        #[arg(long, value_enum, value_delimiter = ',')]
        check: Vec<Check>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let mut stdout = std::io::stdout().lock();
    let status = match cli.command {
        Command::Run { config, out, seed } => cmd_run(&config, &out, seed, &mut stdout),
        Command::Compare { config, out_dir } => {
            cmd_compare(&config, out_dir.as_deref(), &mut stdout)
        }
        Command::Stability { config, strict } => cmd_stability(&config, strict, &mut stdout),
        Command::Validate {
            triples,
            n1,
            n2,
            check,
        } => cmd_validate(&triples, n1, n2, &check, &mut stdout),
    };
    ExitCode::from(status.code())
}
