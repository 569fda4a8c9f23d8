mod args;
mod commands;
mod error;
mod io;

use args::{Cli, Command};
use clap::Parser;
use error::{input, CliResult};
use std::process::ExitCode;

/// `SHRINKAGE_THREADS` caps the worker pool; unset means one per core.
fn configure_threads() -> CliResult<()> {
    let Ok(v) = std::env::var("SHRINKAGE_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| input(format!("SHRINKAGE_THREADS must be a positive integer, got `{v}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| input(format!("cannot size the thread pool: {e}")))
}

fn run(cli: Cli) -> CliResult<()> {
    configure_threads()?;
    match cli.command {
        Command::Fit { prior, mcmc, io, config } => commands::fit(prior, mcmc, io, config),
        Command::Simulate { sim, prior, mcmc, out, config } => commands::simulate(sim, prior, mcmc, out, config),
        Command::Density { prior, grid, out, config } => commands::density(prior, grid, out, config),
        Command::Screen { io, k, config } => commands::screen(io, k, config),
        Command::Predict {
            split,
            prior,
            mcmc,
            io,
            config,
        } => commands::predict(split, prior, mcmc, io, config),
        Command::Diagnose { diag, out, config } => commands::diagnose(diag, out, config),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
