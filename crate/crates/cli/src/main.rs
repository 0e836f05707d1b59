use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use twistpair_cli::commands::{self, CliError};
use twistpair_cli::{parse_input, InputDocument};

#[derive(Parser)]
#[command(name = "twistpair", version, about = "Twists over finite groupoids and their algebraic pairs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Upper bound on any exhaustive search; overrides `cap` in the input.
    #[arg(long, global = true)]
    cap: Option<u64>,
    /// Run the independent oracles as well and fail on any disagreement.
    #[arg(long, global = true)]
    oracle: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate the input, then summarise it.
    Check { input: PathBuf },
    /// Evaluate every pair condition.
    Classify { input: PathBuf },
    /// Rebuild the twist from the pair and compare it with the input.
    Reconstruct { input: PathBuf },
    /// Enumerate units of the twisted group ring at each object.
    Units { input: PathBuf },
    /// Look for a unique product in AB.
    Upp { input: PathBuf },
    /// Decide whether two twists are isomorphic.
    Compare { first: PathBuf, second: PathBuf },
}

fn load(path: &Path, cli: &Cli) -> Result<InputDocument, CliError> {
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|error| CliError::Io { path: shown.clone(), error })?;
    let mut doc = parse_input(&text).map_err(|error| CliError::Parse { path: shown, error })?;
    if let Some(cap) = cli.cap {
        doc.options.cap = cap;
    }
    doc.options.oracle |= cli.oracle;
    Ok(doc)
}

fn run(cli: &Cli) -> Result<commands::Report, CliError> {
    match &cli.command {
        Command::Check { input } => commands::check(&load(input, cli)?),
        Command::Classify { input } => commands::classify(&load(input, cli)?),
        Command::Reconstruct { input } => commands::reconstruct(&load(input, cli)?),
        Command::Units { input } => commands::units(&load(input, cli)?),
        Command::Upp { input } => commands::upp(&load(input, cli)?),
        Command::Compare { first, second } => commands::compare(&load(first, cli)?, &load(second, cli)?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            print!("{}", report.render());
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
