//! Command-line front end for extreme outcome-dependent sampling studies.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod study;

use std::io::Write;

use args::{Cli, Command};
pub use error::{CliError, Result};

pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<()> {
    match &cli.command {
        Command::Analyze(a) => commands::analyze(a, stdout).map(|_| ()),
        Command::Plan(a) => commands::plan(a, stdout).map(|_| ()),
        Command::Screen(a) => commands::screen(a, stdout),
        Command::Simulate(a) => commands::simulate(a, stdout),
        Command::Check(a) => commands::check(a, stdout),
    }
}
