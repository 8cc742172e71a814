mod cli;
mod commands;
mod number;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use crate::cli::{Cli, Command};
use crate::output::{CliError, Format, Output};

fn dispatch(command: &Command) -> Result<Output, CliError> {
    match command {
        Command::Eval(a) => commands::eval(a),
        Command::Derive(a) => commands::derive(a),
        Command::Velocity(a) => commands::velocity(a),
        Command::Entropy(a) => commands::entropy(a),
        Command::Mean(a) => commands::mean(a),
        Command::Audit(a) => commands::audit(a),
        Command::Bell(a) => commands::bell(a),
        Command::Cosmo(a) => commands::cosmo(a),
        Command::Cantor(a) => commands::cantor(a),
    }
}

fn render(out: Output, format: Format) -> Result<String, CliError> {
    match format {
        Format::Human => Ok(out.human + "\n"),
        Format::Json => Ok(serde_json::to_string_pretty(&out.json).expect("json renders") + "\n"),
        Format::Csv => out.csv.ok_or_else(|| CliError::Usage("--csv is not available for this verb".into())),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = if cli.json {
        Format::Json
    } else if cli.csv {
        Format::Csv
    } else {
        Format::Human
    };
    match dispatch(&cli.command).and_then(|out| render(out, format)) {
        Ok(text) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            if format == Format::Json {
                println!("{}", serde_json::to_string_pretty(&e.to_json()).expect("json renders"));
            }
            eprintln!("error[{}]: {}", e.kind(), e.message());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
