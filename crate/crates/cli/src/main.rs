mod args;
mod commands;
mod job;
mod pins;
mod svg;

use std::process::ExitCode;

use clap::Parser;

use args::Cli;
use commands::CliError;

fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("CANON_NUM_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::input(format!("CANON_NUM_THREADS must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::input(e.to_string()))
}

fn execute(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    let command = match (cli.job, cli.command) {
        (Some(path), None) => job::load(&path)?,
        (None, Some(command)) => command,
        _ => return Err(CliError::input("give a subcommand or --job <path>")),
    };
    commands::run(command)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code as u8)
        }
    }
}
