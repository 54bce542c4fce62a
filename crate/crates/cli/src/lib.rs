//! Command-line experiments over the batch word-RASP machine.

pub mod args;
pub mod commands;
pub mod manifest;

use anyhow::Result;
use clap::Parser;

use args::{Cli, Command};

pub fn run(cli: Cli) -> Result<()> {
    let p = cli.machine.params()?;
    match cli.command {
        Command::Compile { source, out } => commands::compile(&p, &source, out.as_deref()),
        Command::Run {
            program,
            input,
            tau_max,
            trace,
        } => commands::run(&p, &program, &input, tau_max, trace),
        Command::Sample {
            length,
            count,
            seed,
            json,
            out,
        } => commands::sample(length, count, seed, json, out.as_deref()),
        Command::Halting {
            length,
            count,
            seed,
            inputs,
            batch,
            out,
            results,
        } => commands::halting(&p, length, count, seed, inputs, &batch, out.as_deref(), results.as_deref()).map(drop),
        Command::BbSearch {
            length,
            count,
            time_budget,
            top,
            seed,
            batch,
            fixtures,
            out,
        } => commands::bb_search(&p, length, count, time_budget, top, seed, &batch, fixtures, out.as_deref()).map(drop),
        Command::Bench {
            length,
            count,
            workers,
            tau_max,
            epoch,
            seed,
            out,
        } => commands::bench(&p, length, &count, &workers, tau_max, epoch, seed, out.as_deref()).map(drop),
        Command::Selftest { seed } => commands::selftest(&p, seed),
    }
}

/// Parses arguments, runs, and returns the process exit code.
pub fn main_with<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}
