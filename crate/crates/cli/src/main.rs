use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use lcbayes_cli::commands;
use lcbayes_cli::report::to_text;
use lcbayes_cli::CliResult;
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "lcbayes", version, about = "Exact admissibility and Bayes analysis with infinitesimals")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Truncation order for LC division.
    #[arg(long, global = true, default_value_t = 8, value_parser = clap::value_parser!(u32).range(1..))]
    order: u32,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Finite decision problems read from JSON.
    Finite {
        #[command(subcommand)]
        command: FiniteCommand,
    },
    /// Built-in parametric examples.
    Example {
        name: ExampleName,
        /// Dimension of the normal-location example.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..=64))]
        dim: u64,
    },
    /// Levi-Civita field expressions.
    Lc {
        #[command(subcommand)]
        command: LcCommand,
    },
}

#[derive(Debug, Subcommand)]
enum FiniteCommand {
    /// Admissibility, extended admissibility and Bayes status of each procedure.
    Classify {
        problem: PathBuf,
        #[arg(long)]
        procedures: PathBuf,
    },
    /// Least favourable prior for one procedure.
    SynthesizePrior {
        problem: PathBuf,
        #[arg(long)]
        procedures: PathBuf,
        #[arg(long)]
        procedure: usize,
        /// Include the game LP in the output.
        #[arg(long)]
        emit_lp: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExampleName {
    NormalLocation,
    BernoulliBoundary,
}

#[derive(Debug, Subcommand)]
enum LcCommand {
    /// Evaluate an expression in eps.
    Eval { expr: String },
}

fn render<T: Serialize>(value: &T, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Text => {
            let v = serde_json::to_value(value).expect("reports serialize");
            match v {
                serde_json::Value::Array(items) => {
                    items.iter().map(to_text).collect::<Vec<_>>().join("\n")
                }
                other => to_text(&other),
            }
        }
    }
}

fn run(cli: &Cli) -> CliResult<String> {
    Ok(match &cli.command {
        Command::Finite { command: FiniteCommand::Classify { problem, procedures } } => {
            render(&commands::finite_classify(problem, procedures)?, cli.format)
        }
        Command::Finite { command: FiniteCommand::SynthesizePrior { problem, procedures, procedure, emit_lp } } => {
            render(&commands::finite_synthesize(problem, procedures, *procedure, *emit_lp)?, cli.format)
        }
        Command::Example { name: ExampleName::NormalLocation, dim } => {
            render(&commands::example_normal_location(*dim as usize, cli.order)?, cli.format)
        }
        Command::Example { name: ExampleName::BernoulliBoundary, .. } => {
            render(&commands::example_bernoulli_boundary()?, cli.format)
        }
        Command::Lc { command: LcCommand::Eval { expr } } => render(&commands::lc_eval(expr, cli.order)?, cli.format),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
