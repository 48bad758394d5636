//! Front-end for the `voi` binary: argument parsing, subcommands and output.

pub mod args;
pub mod commands;
pub mod error;
pub mod output;
pub mod svg;
pub mod verify;

use std::ffi::OsString;

use clap::Parser;

use crate::args::Cli;

/// Parses `argv`, runs the subcommand and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match commands::dispatch(&cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
