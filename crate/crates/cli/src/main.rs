//! `mzi`: scans, presets, polytope queries and interrogation reports.

mod angle;
mod commands;
mod graphdoc;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use output::Format;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{origin}:{line}:{column}: {message}")]
    Parse {
        origin: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{origin}: {field}: {message}")]
    Field {
        origin: String,
        field: String,
        message: String,
    },
    #[error(transparent)]
    Core(#[from] mzi_coherence::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Parse { .. } | CliError::Field { .. } => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "mzi",
    version,
    about = "Overlap inequalities and contextual advantage in Mach-Zehnder interferometers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output encoding; each command has its own default.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate h(θ₁, φ₁), or h1 for a general input when --theta0/--phi0 are set.
    ScanH(commands::ScanHArgs),
    /// Parallel-preparation presets: fig3b, fig3c, k5-equator.
    Parallel(commands::ParallelArgs),
    /// Event-graph queries.
    Graph {
        #[command(subcommand)]
        action: commands::GraphCommand,
    },
    /// Quantum interrogation reports.
    Interrogate {
        #[command(subcommand)]
        mode: commands::InterrogateCommand,
    },
    /// Prepare-and-measure scenarios built from event graphs.
    Scenario {
        #[command(subcommand)]
        action: commands::ScenarioCommand,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::ScanH(args) => commands::scan_h(args),
        Command::Parallel(args) => commands::parallel(args),
        Command::Graph { action } => commands::graph(action),
        Command::Interrogate { mode } => commands::interrogate(mode),
        Command::Scenario { action } => commands::scenario(action),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
