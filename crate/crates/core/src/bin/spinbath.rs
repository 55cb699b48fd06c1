use clap::{Parser, Subcommand};
use spinbath::cli::{run, Command, RunArgs};

#[derive(Parser)]
#[command(version, about = "Purity loss and decoherence-free states of two spin ensembles")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Numeric vs analytic purity-loss rate of the initial state.
    Rate(RunArgs),
    /// Integrate the master equation and tabulate the trajectory.
    Simulate(RunArgs),
    /// Evaluate rates over a parameter grid.
    Sweep(RunArgs),
    /// Certify candidate decoherence-free states.
    Dfs(RunArgs),
    /// Print a state's coefficients and Schmidt data.
    State(RunArgs),
}

fn main() {
    let cli = Cli::parse();
    let (command, args) = match cli.command {
        Sub::Rate(a) => (Command::Rate, a),
        Sub::Simulate(a) => (Command::Simulate, a),
        Sub::Sweep(a) => (Command::Sweep, a),
        Sub::Dfs(a) => (Command::Dfs, a),
        Sub::State(a) => (Command::State, a),
    };
    if let Err(e) = run(command, &args) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
