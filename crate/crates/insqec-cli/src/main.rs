//! `insqec`: experiment runner for single-insertion error correction on
//! gnu permutation-invariant codes.
//!
//! Exit codes: 0 all checks passed, 1 usage or configuration error,
//! 2 numerical violation.

mod config;
mod runs;

use clap::{Parser, Subcommand};

use config::{Format, RunArgs};
use runs::Report;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numeric(String),
}

impl From<insqec::Error> for CliError {
    fn from(e: insqec::Error) -> Self {
        match &e {
            insqec::Error::Leakage(_) | insqec::Error::IncompleteProjectors(_) => {
                CliError::Numeric(e.to_string())
            }
            _ => CliError::Usage(e.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(name = "insqec", version, about = "Single-insertion QEC on gnu codes")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// One encode -> insert -> extract -> recover pipeline.
    Single(RunArgs),
    /// Sampled syndrome frequencies against the analytic distribution.
    Montecarlo(RunArgs),
    /// Norm-equality verification over a (g, n, u) grid.
    Lemma(RunArgs),
    /// Reproduce the four-qubit worked example.
    Example(RunArgs),
    /// Analytic/oracle comparison swept over every insertion position.
    Sweep(RunArgs),
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let usage_error = e.use_stderr();
            let _ = e.print();
            return if usage_error { 1 } else { 0 };
        }
    };
    let (args, result) = match &cli.cmd {
        Cmd::Single(a) => (a, config::resolve(a, "single").and_then(|c| runs::run_single(&c))),
        Cmd::Montecarlo(a) => {
            (a, config::resolve(a, "montecarlo").and_then(|c| runs::run_montecarlo(&c)))
        }
        Cmd::Lemma(a) => (a, config::resolve(a, "lemma").and_then(|c| runs::run_lemma(&c))),
        Cmd::Example(a) => (a, config::resolve(a, "example").and_then(|_| runs::run_example())),
        Cmd::Sweep(a) => (a, config::resolve(a, "sweep").and_then(|c| runs::run_sweep(&c))),
    };
    match result {
        Ok(report) => emit(args, report),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            1
        }
        Err(CliError::Numeric(msg)) => {
            eprintln!("violation: {msg}");
            2
        }
    }
}

fn emit(args: &RunArgs, report: Report) -> i32 {
    let text = match args.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report.json).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Csv => match &report.csv {
            Some(csv) => csv.clone(),
            None => {
                eprintln!("error: csv output is not available for this subcommand");
                return 1;
            }
        },
    };
    if let Some(path) = &args.out {
        if let Err(e) = std::fs::write(path, &text) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return 1;
        }
    } else {
        print!("{text}");
    }
    if report.passed {
        0
    } else {
        2
    }
}
