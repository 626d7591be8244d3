//! `rfa`: command-line driver for training, the reward-free pipeline,
//! evaluation and verification.

mod args;
mod commands;
mod context;

use std::ffi::OsString;
use std::process::ExitCode;

use clap::{ArgMatches, CommandFactory, FromArgMatches};

use args::Cli;

/// Parses `argv`, splicing the `--config` file's settings in right after the
/// subcommand so that flags given later on the command line win.
fn parse(argv: Vec<OsString>) -> Result<(Cli, ArgMatches), clap::Error> {
    let command = || Cli::command().args_override_self(true);
    let matches = command().try_get_matches_from(&argv)?;
    let Some((name, sub)) = matches.subcommand() else {
        return Ok((Cli::from_arg_matches(&matches)?, matches));
    };
    let Some(path) = sub.get_one::<std::path::PathBuf>("config").cloned() else {
        return Ok((Cli::from_arg_matches(&matches)?, matches));
    };
    let settings = rfa_core::io::read_settings(&path).map_err(|e| {
        command().error(clap::error::ErrorKind::Io, e.to_string())
    })?;
    let at = argv.iter().position(|a| a == name).map_or(argv.len(), |i| i + 1);
    let mut spliced: Vec<OsString> = argv[..at].to_vec();
    for (k, v) in settings {
        spliced.push(format!("--{k}").into());
        spliced.push(v.into());
    }
    spliced.extend_from_slice(&argv[at..]);
    let matches = command().try_get_matches_from(&spliced)?;
    Ok((Cli::from_arg_matches(&matches)?, matches))
}

fn main() -> ExitCode {
    let (cli, matches) = match parse(std::env::args_os().collect()) {
        Ok(p) => p,
        Err(e) => e.exit(),
    };
    let sub = matches.subcommand().map(|(_, m)| m).unwrap_or(&matches);
    match commands::run(cli.command, sub) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("rfa: {e}");
            ExitCode::from(e.code())
        }
    }
}

