mod args;
mod commands;
mod config;

use std::process::ExitCode;

use clap::Parser;
use serde::Serialize;

use args::{Cli, Command};

/// A failure reported as one JSON line on stderr.
#[derive(Debug)]
pub struct CliError {
    kind: &'static str,
    message: String,
    code: u8,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            kind: "usage",
            message: message.into(),
            code: 2,
        }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self {
            kind: "io",
            message: message.into(),
            code: 2,
        }
    }
}

impl From<fpv_core::Error> for CliError {
    fn from(e: fpv_core::Error) -> Self {
        let code = match e {
            fpv_core::Error::Io(_) | fpv_core::Error::Config(_) => 2,
            _ => 1,
        };
        Self {
            kind: e.kind(),
            message: e.to_string(),
            code,
        }
    }
}

#[derive(Serialize)]
struct ErrorLine<'a> {
    error: &'a str,
    message: &'a str,
    exit_code: u8,
}

fn fail(e: &CliError) -> ExitCode {
    let line = serde_json::to_string(&ErrorLine {
        error: e.kind,
        message: &e.message,
        exit_code: e.code,
    })
    .unwrap_or_else(|_| format!("{{\"error\":\"{}\"}}", e.kind));
    eprintln!("{line}");
    ExitCode::from(e.code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let message = e.to_string();
            let first = message.lines().next().unwrap_or("invalid arguments");
            return fail(&CliError::usage(first.trim_start_matches("error: ")));
        }
    };
    let result = match cli.command {
        Command::ExportSentences(a) => commands::export_sentences(a),
        Command::Axes(a) => commands::axes(a),
        Command::Score(a) => commands::score(a),
        Command::Features(a) => commands::features(a),
        Command::EvalApproach1(a) => commands::eval_approach1(a),
        Command::EvalApproach2(a) => commands::eval_approach2(a),
        Command::Project(a) => commands::project_cmd(a),
        Command::Cluster(a) => commands::cluster(a),
        Command::Correlate(a) => commands::correlate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(&e),
    }
}
