//! `bogo`: batch experiment runner for the bogoliubov crate.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::output::{CliError, Sink};

#[derive(Debug, Parser)]
#[command(name = "bogo", version, about = "Bogoliubov theory experiments")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GlobalArgs {
    /// Write the JSON artifact here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Write the CSV table (scan commands) here.
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
    /// Directory receiving `<command>.json`, `<command>.csv` and `manifest.json`.
    #[arg(long, global = true, env = "BOGO_OUT_DIR")]
    pub out_dir: Option<PathBuf>,
    /// Worker threads for scans (default: all cores).
    #[arg(long, global = true, env = "BOGO_THREADS")]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Diagonalize a 1-pdm given as JSON.
    Diag(commands::DiagArgs),
    /// Ground energy of a quadratic Hamiltonian, optionally checked in Fock space.
    Quadham(commands::QuadhamArgs),
    /// Compare Wick's theorem with exact Fock-space moments.
    Wick(commands::WickArgs),
    /// The one-mode toy model a*a*aa.
    Toy(commands::ToyArgs),
    /// Hartree and Bogoliubov computations for bosonic atoms.
    Atom {
        #[command(subcommand)]
        command: commands::AtomCommand,
    },
    /// Seeded randomized property suite.
    VerifyAll(commands::VerifyArgs),
    /// Run a subcommand described by a JSON config file.
    Run(config::RunArgs),
}

fn parse_and_run(argv: Vec<String>, depth: usize) -> Result<(), CliError> {
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return Ok(());
            }
            return Err(CliError::Usage(e.to_string()));
        }
    };
    if let Some(n) = cli.global.threads {
        // a nested `run` finds the pool already built
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let sink = Sink::new(cli.global.clone());
    match cli.command {
        Command::Diag(a) => sink.emit("diag", &a, commands::diag(&a)?),
        Command::Quadham(a) => sink.emit("quadham", &a, commands::quadham(&a)?),
        Command::Wick(a) => sink.emit("wick", &a, commands::wick(&a)?),
        Command::Toy(a) => sink.emit("toy", &a, commands::toy(&a)?),
        Command::Atom { command } => {
            let (name, cfg, art) = commands::atom(&command)?;
            sink.emit(name, &cfg, art)
        }
        Command::VerifyAll(a) => sink.emit("verify-all", &a, commands::verify_all(&a)?),
        Command::Run(a) => {
            if depth > 0 {
                return Err(CliError::Input("a config may not invoke `run` again".into()));
            }
            let mut next = vec![argv[0].clone()];
            next.extend(config::expand(&a)?);
            parse_and_run(next, depth + 1)
        }
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    match parse_and_run(argv, 0) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => e.report(),
    }
}
