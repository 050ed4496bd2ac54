//! `pgm-tight`: rate tables, simulations, tightness reports and
//! certificate checks. Exit status 0 on success, 1 when a check fails,
//! 2 on a malformed invocation.

mod args;
mod commands;
mod num;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::Cli;
use num::UsageError;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let common = commands::common(&cli.command);
    let report = match commands::dispatch(&cli.command) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(if e.is::<UsageError>() { 2 } else { 1 });
        }
    };
    if let Err(e) = output::emit(&report, common.format, common.out.as_deref()) {
        eprintln!("error: {e:#}");
        return ExitCode::from(1);
    }
    if report.verdict.passed() {
        ExitCode::SUCCESS
    } else {
        for f in &report.verdict.failures {
            eprintln!("check failed: {f}");
        }
        ExitCode::from(1)
    }
}
