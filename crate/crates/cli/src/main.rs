mod cli;
mod commands;
mod input;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use grasscs_core::Execution;
use serde_json::{json, Value};

use cli::{Cli, Command};
use commands::{Context, Output};

pub const EXIT_PRECONDITION: u8 = 2;
pub const EXIT_INTERNAL: u8 = 3;
pub const EXIT_USAGE: u8 = 64;

#[derive(Debug)]
pub enum CliError {
    Precondition(String),
    Internal(String),
}

impl From<grasscs_core::Error> for CliError {
    fn from(e: grasscs_core::Error) -> Self {
        if e.is_internal() {
            CliError::Internal(e.to_string())
        } else {
            CliError::Precondition(e.to_string())
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Precondition(_) => EXIT_PRECONDITION,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }

    fn to_json(&self) -> Value {
        match self {
            CliError::Precondition(m) => json!({ "kind": "precondition", "message": m }),
            CliError::Internal(m) => json!({ "kind": "internal", "message": m }),
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Basis(_) => "basis",
        Command::Kernel(_) => "kernel",
        Command::Overlap(_) => "overlap",
        Command::Generators(_) => "generators",
        Command::Symbols(_) => "symbols",
        Command::Phase(_) => "phase",
        Command::Husimi(_) => "husimi",
        Command::Entropy(_) => "entropy",
        Command::Moment(_) => "moment",
        Command::Conjecture(_) => "conjecture",
        Command::Su2(_) => "su2",
    }
}

fn emit(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Precondition(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Internal(format!("cannot write to stdout: {e}")))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    let ctx = Context {
        seed: cli.seed,
        exec: if cli.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        },
        format: cli.format,
    };
    let inputs = serde_json::to_value(&cli.command)
        .ok()
        .and_then(|v| v.as_object().and_then(|o| o.values().next().cloned()))
        .unwrap_or(Value::Null);
    let outcome = commands::run(&cli.command, &ctx);
    let (results, errors, code) = match outcome {
        Ok(Output::Csv(s)) => {
            return match emit(&cli, &s) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e:?}");
                    ExitCode::from(e.exit_code())
                }
            };
        }
        Ok(Output::Json(v)) => (v, vec![], 0),
        Err(e) => {
            eprintln!("error: {}", e.to_json()["message"].as_str().unwrap_or_default());
            (Value::Null, vec![e.to_json()], e.exit_code())
        }
    };
    let doc = json!({
        "command": command_name(&cli.command),
        "inputs": inputs,
        "results": results,
        "errors": errors,
        "seed": cli.seed,
        "version": env!("CARGO_PKG_VERSION"),
    });
    let mut text = serde_json::to_string_pretty(&doc).expect("documents are plain JSON");
    text.push('\n');
    if let Err(e) = emit(&cli, &text) {
        eprintln!("error: {e:?}");
        return ExitCode::from(e.exit_code());
    }
    ExitCode::from(code)
}
