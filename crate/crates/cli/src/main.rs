mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;

use crate::args::Cli;
use crate::output::Failure;

const THREADS_ENV: &str = "QCHAIN_THREADS";

fn init_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| Failure::Validation(format!("{THREADS_ENV} must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Validation(format!("cannot start {n} worker threads: {e}")))
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    init_threads()?;
    let started = std::time::Instant::now();
    let outcome = commands::dispatch(&cli)?;
    output::emit(&cli, &outcome, started.elapsed())?;
    Ok(outcome.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("qchain: {failure}");
            failure.exit_code()
        }
    }
}
