//! Configuration-driven front end used by the `spinbath` binary.
//!
//! A scenario is one JSON document (see [`ScenarioConfig`]); each command
//! turns it into a [`Table`] written as CSV (with `#` provenance lines) or
//! JSON.

mod commands;
mod config;
mod output;

pub use commands::{cmd_dfs, cmd_rate, cmd_simulate, cmd_state, cmd_sweep, CliError, Outcome, SELF_CHECK_TOL};
pub use config::{
    build_state, polarized_state, DfsCandidate, DfsConfig, GammaTarget, HamiltonianTerm, ModelConfig,
    OutputConfig, OutputFormat, ScenarioConfig, StateConfig, SweepConfig, SweepParameter,
};
pub use output::{write_table, Cell, Header, Table};

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Rate,
    Simulate,
    Sweep,
    Dfs,
    State,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Rate => "rate",
            Command::Simulate => "simulate",
            Command::Sweep => "sweep",
            Command::Dfs => "dfs",
            Command::State => "state",
        }
    }
}

/// Flags shared by every subcommand.
#[derive(Clone, Debug, clap::Args)]
pub struct RunArgs {
    /// Scenario JSON file.
    #[arg(long)]
    pub config: PathBuf,
    /// Output file; overrides the config's output.path. Stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format; overrides the config's output.format.
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    /// Worker threads for sweeps.
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    /// Recorded in the output header.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Loads the scenario, runs `command` and writes its table.
pub fn run(command: Command, args: &RunArgs) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| CliError::Config(format!("{}: {e}", args.config.display())))?;
    let cfg = ScenarioConfig::from_json(&text).map_err(|e| CliError::Config(e.to_string()))?;
    let output = cfg.output.clone().unwrap_or_default();
    let format = args.format.unwrap_or(output.format);
    let outcome = match command {
        Command::Rate => cmd_rate(&cfg)?,
        Command::Simulate => cmd_simulate(&cfg, format == OutputFormat::Json)?,
        Command::Sweep => cmd_sweep(&cfg, args.threads)?,
        Command::Dfs => cmd_dfs(&cfg)?,
        Command::State => cmd_state(&cfg)?,
    };
    let header = Header {
        command: command.name().into(),
        config_hash: cfg.hash(),
        seed: args.seed,
    };
    match args.out.clone().or(output.path) {
        Some(path) => {
            let mut w = BufWriter::new(File::create(&path)?);
            write_table(&mut w, &header, &outcome.table, format)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            write_table(&mut lock, &header, &outcome.table, format)?;
        }
    }
    outcome.failure.map_or(Ok(()), Err)
}
