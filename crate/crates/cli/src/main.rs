//! `nogo`: verify, scan, demo and usd front ends over `nogo-core`.
//!
//! Exit statuses: 0 success, 2 configuration error, 3 numerical or I/O
//! error, 4 demo refused because the outputs stay dependent.

mod args;
mod commands;
mod config;
mod error;
mod report;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let rendered = e.to_string();
            let line = rendered
                .lines()
                .find(|l| !l.trim().is_empty())
                .unwrap_or("invalid arguments");
            eprintln!("nogo: config error: {}", line.trim_start_matches("error: "));
            return ExitCode::from(2);
        }
    };
    let outcome = match &cli.command {
        Command::Verify(a) => commands::verify(a),
        Command::Scan(a) => commands::scan(a),
        Command::Demo(a) => commands::demo(a),
        Command::Usd(a) => commands::usd(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.message());
            e.exit_code()
        }
    }
}
