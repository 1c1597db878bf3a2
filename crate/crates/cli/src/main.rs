//! `fairdice`: exact optimal weighted dice, numerical search and
//! negative-weight uniform constructions from the command line.

mod commands;
mod dicefile;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fairdice::Mode;

use output::Outputs;

#[derive(Debug, Parser)]
#[command(name = "fairdice", version, about = "Weighted dice whose total is as uniform as possible")]
struct Cli {
    /// Write a JSON report (including the run manifest) here.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Write a CSV table here.
    #[arg(long, global = true, value_name = "PATH")]
    csv: Option<PathBuf>,
    /// Seed for the random starts of `optimize`.
    #[arg(long, global = true, env = "FAIRDICE_SEED")]
    seed: Option<u64>,
    /// Arithmetic for exact subcommands; `optimize` and `construct` are always float.
    #[arg(long, global = true, value_parser = parse_mode)]
    mode: Option<Mode>,
    /// Leave the timestamp out of the manifest so identical runs give identical files.
    #[arg(long, global = true)]
    no_timestamp: bool,
    #[command(subcommand)]
    command: Command,
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse()
}

#[derive(Debug, Subcommand)]
enum Command {
    /// The proven optimal pair of n-sided dice.
    Optimal {
        #[arg(long)]
        n: usize,
    },
    /// Multi-start projected gradient descent on D for m n-sided dice.
    Optimize(OptimizeArgs),
    /// Real-weighted dice (negative weights allowed) with an exactly uniform total.
    Construct {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// Factor indices per die, e.g. "1,2;3,4".
        #[arg(long)]
        partition: Option<String>,
    },
    /// Sum distribution and D for the dice in a JSON file.
    Distance { file: PathBuf },
    /// The conjectured optimal m-dice pattern (not proven).
    Conjecture {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
    },
}

#[derive(Debug, Args)]
struct OptimizeArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 200)]
    starts: usize,
    #[arg(long, default_value_t = 50_000)]
    max_iters: usize,
    #[arg(long, default_value_t = 0.5)]
    step: f64,
    #[arg(long, default_value_t = 0.5)]
    armijo_beta: f64,
    #[arg(long, default_value_t = 1e-4)]
    armijo_c: f64,
    #[arg(long, default_value_t = 1e-12)]
    grad_tol: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = Outputs {
        json: cli.json,
        csv: cli.csv,
        seed: cli.seed,
        no_timestamp: cli.no_timestamp,
    };
    let result = match cli.command {
        Command::Optimal { n } => commands::optimal(n, cli.mode, &out),
        Command::Optimize(a) => {
            let cfg = fairdice::OptimizerConfig {
                starts: a.starts,
                max_iters: a.max_iters,
                step: a.step,
                armijo_beta: a.armijo_beta,
                armijo_c: a.armijo_c,
                grad_tol: a.grad_tol,
                seed: out.seed.unwrap_or(0),
            };
            commands::optimize(a.n, a.m, cfg, cli.mode, &out)
        }
        Command::Construct { n, m, partition } => {
            commands::construct(n, m, partition.as_deref(), cli.mode, &out)
        }
        Command::Distance { file } => commands::distance(&file, cli.mode, &out),
        Command::Conjecture { n, m } => commands::conjecture(n, m, cli.mode, &out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
