mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Decompose(a) => commands::decompose::run(a),
        Command::Tradeoff(a) => commands::tradeoff::run(a),
        Command::Modes(a) => commands::modes::run(a),
        Command::Snr(a) => commands::snr::run(a),
        Command::Qkd(a) => commands::qkd::run(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("tffilter: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
