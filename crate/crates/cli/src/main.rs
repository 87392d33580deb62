mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hand_length::game::GameError;
use hand_length::PointGameSpec;

/// Exact and simulated distribution of the length of a shooter's hand.
#[derive(Debug, Parser)]
#[command(name = "hand-length", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Table of P(L >= n) by exact arithmetic and by the closed form.
    Tail(TailArgs),
    /// Characteristic polynomial, eigenvalues, mixture coefficients and structure.
    Eigen(EigenArgs),
    /// Monte Carlo simulation of hands compared with the exact tail.
    Simulate(SimulateArgs),
    /// Runs every cross-method and structural check.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct GameArg {
    /// `craps`, `crapless`, or a path to a game JSON file.
    #[arg(long, default_value = "craps")]
    game: String,
}

#[derive(Debug, Args)]
struct TailArgs {
    #[command(flatten)]
    game: GameArg,
    /// Largest hand length in the table.
    #[arg(long, default_value_t = 154, value_parser = clap::value_parser!(u32).range(1..))]
    n: u32,
    /// Significant digits.
    #[arg(long, default_value_t = 9, value_parser = clap::value_parser!(u32).range(1..=MAX_DIGITS))]
    digits: u32,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Args)]
struct EigenArgs {
    #[command(flatten)]
    game: GameArg,
    /// Decimal places.
    #[arg(long, default_value_t = 18, value_parser = clap::value_parser!(u32).range(1..=MAX_DIGITS))]
    digits: u32,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    game: GameArg,
    #[arg(long, default_value_t = 1_000_000, value_parser = positive)]
    trials: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Largest hand length compared with the exact tail.
    #[arg(long, default_value_t = 30, value_parser = clap::value_parser!(u32).range(1..))]
    n: u32,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    game: GameArg,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

fn positive(s: &str) -> Result<u64, String> {
    match s.parse::<u64>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

const MAX_DIGITS: i64 = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
    /// `n,t` pairs for plotting (tail only).
    Plot,
}

pub enum CliError {
    Usage(String),
    Verification(String),
}

impl From<GameError> for CliError {
    fn from(e: GameError) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn load_game(arg: &GameArg) -> Result<PointGameSpec, CliError> {
    let spec = match arg.game.as_str() {
        "craps" | "crapless" => PointGameSpec::builtin(&arg.game)?,
        path => PointGameSpec::from_json_path(&PathBuf::from(path))?,
    };
    if spec.points().is_empty() {
        return Err(CliError::Usage(
            "invalid game: no point numbers, so a hand never ends".into(),
        ));
    }
    Ok(spec)
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut out = std::io::stdout().lock();
    match cli.command {
        Command::Tail(a) => {
            let game = load_game(&a.game)?;
            commands::tail(&mut out, &game, a.n as usize, a.digits as usize, a.format)
        }
        Command::Eigen(a) => {
            let game = load_game(&a.game)?;
            commands::eigen(&mut out, &game, a.digits as usize, a.format)
        }
        Command::Simulate(a) => {
            let game = load_game(&a.game)?;
            commands::simulate(&mut out, &game, a.trials, a.seed, a.n as usize, a.format)
        }
        Command::Verify(a) => {
            let game = load_game(&a.game)?;
            commands::verify(&mut out, &game, a.format)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Verification(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
