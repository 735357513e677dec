//! `semijulia`: experiments on Julia sets and invariant sets of polynomial
//! semigroups.

mod commands;
mod config;
mod error;
mod lemma;
mod render;
mod report;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::RunArgs;
use crate::lemma::LemmaCommand;

#[derive(Parser, Debug)]
#[command(name = "semijulia", version, about = "Word-orbit experiments for polynomial semigroups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Draw a cloud or an escape-time picture as a PPM image.
    Render(RenderArgs),
    /// Approximate the semigroup Julia set by backward word orbits.
    SemigroupJulia(CloudArgs),
    /// Approximate the smallest completely invariant set by mixed word orbits.
    InvariantSet(CloudArgs),
    /// Sphere coverage of the invariant-set walk, round by round.
    Coverage(RunArgs),
    /// Decide whether two polynomials share a Julia set.
    Compare(RunArgs),
    /// Exact checks of the line dynamics, circle and monomial lemmas.
    #[command(subcommand)]
    Lemma(LemmaCommand),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum RenderMode {
    /// Julia cloud of a single polynomial.
    Single,
    SemigroupJulia,
    InvariantSet,
    /// Escape-time shading of a single polynomial.
    Escape,
}

impl RenderMode {
    pub fn name(self) -> &'static str {
        match self {
            RenderMode::Single => "single",
            RenderMode::SemigroupJulia => "semigroup-julia",
            RenderMode::InvariantSet => "invariant-set",
            RenderMode::Escape => "escape",
        }
    }
}

#[derive(Args, Debug)]
pub struct RenderArgs {
    #[arg(long, value_enum, default_value = "semigroup-julia")]
    pub mode: RenderMode,
    /// Iteration cap of the escape-time mode.
    #[arg(long, default_value_t = 256)]
    pub max_iter: usize,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Args, Debug)]
pub struct CloudArgs {
    /// Write the cloud as text, one "re im" pair or "inf" per line.
    #[arg(long)]
    pub points: Option<std::path::PathBuf>,
    #[command(flatten)]
    pub run: RunArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let outcome = match cli.command {
        Command::Render(args) => commands::render(&args, argv),
        Command::SemigroupJulia(args) => commands::cloud(&args, false, argv),
        Command::InvariantSet(args) => commands::cloud(&args, true, argv),
        Command::Coverage(args) => commands::coverage(&args, argv),
        Command::Compare(args) => commands::compare(&args, argv),
        Command::Lemma(which) => lemma::run(&which, argv),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
