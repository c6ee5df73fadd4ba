use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use decoherence_lab::config::{build_config, OutputFormat, Scenario};
use decoherence_lab::error::CliError;
use decoherence_lab::scenarios::run_to_bytes;

/// Batch decoherence scenarios emitting deterministic CSV/JSON tables.
#[derive(Parser)]
#[command(name = "decoherence-lab", version, about)]
struct Cli {
    /// Scenario to run.
    #[arg(value_enum)]
    scenario: Scenario,

    /// JSON scenario configuration.
    #[arg(long)]
    config: PathBuf,

    /// Override a single parameter (repeatable).
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,

    /// Output artifact path (overrides the config's output.path).
    #[arg(long)]
    out: Option<PathBuf>,

    /// Output format (overrides the config's output.format).
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,

    /// Master seed for stochastic scenarios (overrides the config's seed).
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("DECOHERENCE_LAB_THREADS") {
        match threads.parse::<usize>() {
            Ok(n) if n >= 1 => {
                // results are schedule-independent; this only caps workers
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => {
                eprintln!(
                    "error[validation]: DECOHERENCE_LAB_THREADS must be a positive integer, got '{threads}'"
                );
                return ExitCode::from(2);
            }
        }
    }

    let cli = Cli::parse();
    match execute(cli) {
        Ok(path) => {
            println!("wrote {}", path.display());
            ExitCode::SUCCESS
        }
        Err(err) => {
            let message = err.to_string().replace('\n', "; ");
            eprintln!("error[{}]: {}", err.kind(), message);
            ExitCode::from(err.exit_code())
        }
    }
}

fn execute(cli: Cli) -> Result<PathBuf, CliError> {
    let config =
        build_config(cli.scenario, &cli.config, &cli.set, cli.out, cli.format, cli.seed)?;
    let bytes = run_to_bytes(&config)?;
    std::fs::write(&config.out, bytes).map_err(|e| {
        CliError::Numerical(format!("cannot write {}: {e}", config.out.display()))
    })?;
    Ok(config.out)
}
