use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use decoh::parallel::threads_from_env;
use decoh::{models_json, models_text, run_file, validate_file, RunError, RunOptions};

/// Decoherence scenario runner.
#[derive(Parser)]
#[command(name = "decoh", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write its CSV files and JSON summary.
    Run {
        config: PathBuf,
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Override the config seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// List the available models and their parameters.
    Models {
        #[arg(long)]
        json: bool,
    },
    /// Check a config without running it.
    Validate { config: PathBuf },
}

fn execute(cli: Cli) -> Result<(), RunError> {
    match cli.command {
        Command::Run { config, out, seed } => {
            let threads = threads_from_env()?;
            let report = run_file(&config, &RunOptions { out_dir: out, seed, threads })?;
            for f in &report.files {
                println!("{}", f.display());
            }
        }
        Command::Models { json } => {
            if json {
                println!("{}", models_json());
            } else {
                print!("{}", models_text());
            }
        }
        Command::Validate { config } => {
            let sc = validate_file(&config)?;
            println!("ok\t{}\t{}", sc.name, sc.config.kind().name());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
