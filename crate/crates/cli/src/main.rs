use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use everett_lab::config::ExperimentConfig;
use everett_lab::{resolve_output_dir, run};

/// Numerical laboratory for unitary measurement chains and branch statistics.
#[derive(Parser)]
#[command(name = "everett-lab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment described by a JSON config.
    Run {
        /// Path to the experiment config.
        config: PathBuf,
        /// Where to write outputs (overrides EVERETT_LAB_OUTPUT_DIR and the config).
        #[arg(long)]
        output_dir: Option<PathBuf>,
        /// Seed override for the run.
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            config,
            output_dir,
            seed,
        } => {
            let text = match std::fs::read_to_string(&config) {
                Ok(text) => text,
                Err(e) => {
                    eprintln!("usage error: cannot read {}: {e}", config.display());
                    return ExitCode::from(2);
                }
            };
            let parsed = match ExperimentConfig::from_json(&text) {
                Ok(parsed) => parsed,
                Err(e) => {
                    eprintln!("{e}");
                    return ExitCode::from(2);
                }
            };
            let dir = resolve_output_dir(&parsed, output_dir.as_deref());
            let seed = seed.unwrap_or(parsed.seed);
            match run(&parsed, &dir, seed) {
                Ok(report) if report.all_passed() => ExitCode::SUCCESS,
                Ok(_) => {
                    eprintln!("one or more checks failed; see report.json");
                    ExitCode::from(1)
                }
                Err(e) => {
                    eprintln!("{e}");
                    ExitCode::from(u8::try_from(e.exit_code()).unwrap_or(2))
                }
            }
        }
    }
}
