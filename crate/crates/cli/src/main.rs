use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use modspace::Measure;
use modspace_cli::commands::{self, Overrides};
use modspace_cli::problem::{self, Problem};
use modspace_cli::{demo, selftest, CliError, CliResult};
use serde::Serialize;

/// Modulation-invariant subspaces on finite abelian groups.
#[derive(Debug, Parser)]
#[command(name = "modspace", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Input JSON file (standard input when omitted).
    #[arg(long, global = true)]
    input: Option<PathBuf>,

    /// Output file (standard output when omitted).
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Measure on Λ used for system frame bounds.
    #[arg(long, global = true)]
    measure: Option<Measure>,

    /// Command-specific tolerance (membership, decomposition checks, limit).
    #[arg(long, global = true)]
    tolerance: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Subgroups, sections, fiber dimensions and the range function.
    Analyze,
    /// Membership of each candidate signal.
    Membership,
    /// Fiberwise frame and Riesz bounds of the generator system.
    FrameBounds,
    /// Principal decomposition with ambient verification.
    Decompose,
    /// Modulation metric between `generators` and `other_generators`.
    Metric,
    /// Limit of a Cauchy sequence of spaces.
    Limit,
    /// Ambient test of whether a span is modulation invariant.
    InvarianceCheck,
    /// Worked scenarios on Z_4.
    Demo,
    /// Oracle-equivalence suites on seeded random instances.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn read_input(path: Option<&PathBuf>) -> CliResult<String> {
    let mut text = String::new();
    match path {
        Some(p) => {
            text = std::fs::read_to_string(p).map_err(|e| CliError::validation(format!("{}: {e}", p.display())))?;
        }
        None => {
            std::io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| CliError::validation(format!("stdin: {e}")))?;
        }
    }
    Ok(text)
}

fn load_problem(cli: &Cli) -> CliResult<Problem> {
    Problem::new(problem::parse_problem(&read_input(cli.input.as_ref())?)?)
}

fn render<T: Serialize>(value: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Numerical(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Returns the rendered report and whether its internal checks all passed.
fn dispatch(cli: &Cli) -> CliResult<(String, bool)> {
    let flags = Overrides {
        measure: cli.measure,
        tolerance: cli.tolerance,
    };
    let out = match &cli.command {
        Command::Analyze => render(&commands::analyze(&load_problem(cli)?)?)?,
        Command::Membership => render(&commands::membership(&load_problem(cli)?, flags)?)?,
        Command::FrameBounds => render(&commands::frame_bounds(&load_problem(cli)?, flags)?)?,
        Command::Decompose => render(&commands::decompose(&load_problem(cli)?, flags)?)?,
        Command::Metric => render(&commands::metric(&load_problem(cli)?)?)?,
        Command::Limit => {
            let seq = problem::parse_sequence(&read_input(cli.input.as_ref())?)?;
            render(&commands::limit(&seq, flags)?)?
        }
        Command::InvarianceCheck => render(&commands::invariance_check(&load_problem(cli)?)?)?,
        Command::Demo => {
            let r = demo::run()?;
            return Ok((render(&r)?, r.passed));
        }
        Command::Selftest { seed } => {
            let r = selftest::run(*seed)?;
            return Ok((render(&r)?, r.passed));
        }
    };
    Ok((out, true))
}

fn emit(cli: &Cli, text: &str) -> CliResult<()> {
    match &cli.output {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::validation(format!("{}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::validation(format!("stdout: {e}"))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = dispatch(&cli).and_then(|(text, passed)| {
        emit(&cli, &text)?;
        if passed {
            Ok(())
        } else {
            Err(CliError::Numerical("one or more checks failed; see the report".into()))
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("modspace: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
