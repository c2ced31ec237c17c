mod cli;
mod commands;
mod error;
mod input;
mod output;
mod parse;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::Parser;

use crate::error::{invalid, AppResult};

fn run(cli: &cli::Cli) -> AppResult<()> {
    let report = commands::run(&cli.command)?;
    match &cli.output {
        Some(path) => {
            let file = File::create(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            output::write(&report, cli.format, cli.seed, &mut w)?;
            w.flush().map_err(|e| invalid(format!("{}: {e}", path.display())))
        }
        None => output::write(&report, cli.format, cli.seed, &mut io::stdout().lock()),
    }
}

fn main() -> ExitCode {
    let cli = cli::Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fracdom: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
