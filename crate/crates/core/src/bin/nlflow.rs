use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use nonlocal_flow::scenario::{run_scenario, RunOptions};

/// Nonlocal curvature flow experiments.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a TOML config.
    Run {
        config: PathBuf,
        /// Output directory (overrides `output` in the config).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Seed (overrides `seed` in the config).
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads; defaults to $NLFLOW_THREADS, then all cores.
        #[arg(long)]
        threads: Option<usize>,
        /// Re-check solver results and certificates independently.
        #[arg(long)]
        verify: bool,
    },
}

fn thread_count(flag: Option<usize>) -> Result<Option<usize>, String> {
    if let Some(t) = flag {
        return Ok(Some(t));
    }
    match std::env::var("NLFLOW_THREADS") {
        Ok(v) => v.trim().parse().map(Some).map_err(|_| format!("NLFLOW_THREADS={v:?} is not a thread count")),
        Err(_) => Ok(None),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Command::Run { config, out, seed, threads, verify } = cli.command;
    match thread_count(threads) {
        Err(msg) => {
            eprintln!("config error: {msg}");
            return ExitCode::from(2);
        }
        Ok(Some(0)) => {
            eprintln!("config error: thread count must be positive");
            return ExitCode::from(2);
        }
        Ok(Some(t)) => {
            if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
                eprintln!("config error: {e}");
                return ExitCode::from(2);
            }
        }
        Ok(None) => {}
    }
    match run_scenario(&config, &RunOptions { out, seed, verify }) {
        Ok(run) => {
            println!("{} finished, outputs in {}", run.experiment, run.output.display());
            println!("{}", serde_json::to_string_pretty(&run.summary).expect("summary serializes"));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{e}");
            if let Some(dir) = &e.output {
                eprintln!("outputs kept in {}", dir.display());
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
