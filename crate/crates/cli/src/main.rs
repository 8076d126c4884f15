use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use blochsim_cli::{parse_config, run_scenario};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "blochsim", version, about = "Bloch oscillations on a diatomic chain: circuits, oracles and observables")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the scenario described by a TOML config.
    Run {
        config: PathBuf,
        /// Output directory; overrides `output.dir`.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Dotted `key=value` applied before validation, e.g. `model.v=10`.
        #[arg(long = "override", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn execute(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Run { config, out, overrides } => {
            let text = std::fs::read_to_string(&config).with_context(|| format!("reading {}", config.display()))?;
            let cfg = parse_config(&text, &overrides).with_context(|| format!("in {}", config.display()))?;
            let dir = out.unwrap_or_else(|| PathBuf::from(&cfg.output.dir));
            let artifacts = run_scenario(&cfg, &dir)?;
            for f in &artifacts.files {
                println!("{}", dir.join(f).display());
            }
            Ok(())
        }
    }
}
