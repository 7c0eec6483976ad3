//! Run a TOML scenario through the library, the same way `nlflow run` does.
//!
//! cargo run --release --example scenario -- configs/disk_flow.toml [out_dir]

use std::path::PathBuf;

use nonlocal_flow::scenario::{run_scenario, RunOptions};

fn main() {
    let mut args = std::env::args().skip(1);
    let Some(config) = args.next() else {
        eprintln!("usage: scenario <config.toml> [out_dir]");
        std::process::exit(2);
    };
    let opts = RunOptions { out: args.next().map(PathBuf::from), seed: None, verify: true };
    match run_scenario(config.as_ref(), &opts) {
        Ok(run) => {
            println!("{} -> {}", run.experiment, run.output.display());
            println!("{}", serde_json::to_string_pretty(&run.summary).unwrap());
        }
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(e.exit_code());
        }
    }
}
