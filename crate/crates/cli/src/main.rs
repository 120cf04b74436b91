mod args;
mod commands;
mod error;
mod render;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::json;

use args::{Cli, Command};
use commands::Output;
use error::{CliError, CliResult};

fn dispatch(cli: &Cli) -> CliResult<Output> {
    match &cli.command {
        Command::Solve(a) => commands::solve(a),
        Command::Prepare(a) => commands::prepare(a),
        Command::Run(a) => commands::run_program(a),
        Command::Spectrum(a) => commands::spectrum(a),
        Command::Tomo(a) => commands::tomo(a),
        Command::Plot(a) => commands::plot(a),
        Command::Hogg(a) => commands::hogg(a),
        Command::Presets => commands::list_presets(),
    }
}

fn emit(cli: &Cli, out: Output) -> CliResult<()> {
    let body = match out {
        Output::Json(v) => ppsim::io::canonical_json(&v) + "\n",
        Output::Text(t) => t,
    };
    let written = match &cli.output {
        Some(path) => std::fs::write(path, body).map_err(|e| (path.display().to_string(), e)),
        None => std::io::stdout()
            .lock()
            .write_all(body.as_bytes())
            .map_err(|e| ("stdout".to_string(), e)),
    };
    written.map_err(|(target, e)| {
        CliError::input(
            format!("cannot write {target}: {e}"),
            json!({"path": target}),
        )
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments");
            let err = CliError {
                exit: 1,
                code: "usage",
                message: first.trim_start_matches("error: ").to_string(),
                context: json!({"kind": e.kind().to_string()}),
            };
            eprintln!("{}", err.to_json());
            return ExitCode::from(1);
        }
    };
    match dispatch(&cli).and_then(|out| emit(&cli, out)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit)
        }
    }
}
