use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use nctorus_cli::runner::{self, RunError};

/// Verification harness for the noncommutative-torus interpolation suite.
#[derive(Parser)]
#[command(name = "nctorus", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute the checks requested by a run configuration and write
    /// `report.json`. Exit code: 0 all pass, 1 inequality violation,
    /// 2 convergence/diagnostic failure, 3 config error.
    Run {
        /// Path to the TOML run configuration.
        config: PathBuf,
        /// Master seed override.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory override.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recompute one sample of an element-bearing check and dump its
    /// singular value data and averaged transforms as CSV files.
    DumpSpectrum {
        /// Path to the TOML run configuration.
        config: PathBuf,
        /// Sample reference "CHECK:index", e.g. "THM:3".
        sample_id: String,
        /// Master seed override.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory override.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { config, seed, out } => match runner::run(&config, seed, out) {
            Ok((code, path)) => {
                println!("report written to {}", path.display());
                ExitCode::from(code as u8)
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(exit_for(&e))
            }
        },
        Command::DumpSpectrum {
            config,
            sample_id,
            seed,
            out,
        } => match runner::dump_spectrum(&config, &sample_id, seed, out) {
            Ok((dir, files)) => {
                println!("wrote {} files to {}", files.len(), dir.display());
                for f in files {
                    println!("  {f}");
                }
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(exit_for(&e))
            }
        },
    }
}

fn exit_for(e: &RunError) -> u8 {
    match e {
        RunError::Config(_) | RunError::UnknownSample(_) | RunError::Io(_) => 3,
        RunError::Check(_) => 2,
    }
}
