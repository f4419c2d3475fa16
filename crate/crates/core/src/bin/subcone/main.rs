mod cli;
mod commands;
mod manifest;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use subcone::BigInt;

use cli::{Arith, Cli, Command, OrbitsCommand};
use commands::Outcome;
use manifest::RunManifest;

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Matrix(_) => "matrix",
        Command::Dd(_) => "dd",
        Command::DdStep(_) => "dd-step",
        Command::Neighbors(_) => "neighbors",
        Command::Orbits(OrbitsCommand::Canonicalize { .. }) => "orbits canonicalize",
        Command::Orbits(OrbitsCommand::Expand { .. }) => "orbits expand",
        Command::Harvest(_) => "harvest",
        Command::Stats(_) => "stats",
        Command::Estimate(_) => "estimate",
        Command::Verify(_) => "verify",
        Command::Sample(_) => "sample",
        Command::Bfs(_) => "bfs",
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            // clap's own usage code (2) would collide with "budget exhausted"
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(3),
            };
        }
    };
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }

    let arith = match cli.arith {
        Arith::Big => "big",
        Arith::I128 => "i128",
    };
    let mut m = RunManifest::start(command_name(&cli.command), arith);
    let result = match cli.arith {
        Arith::Big => commands::run::<BigInt>(&cli.command, &mut m, cli.verbose),
        Arith::I128 => commands::run::<i128>(&cli.command, &mut m, cli.verbose),
    };
    let (status, code) = match result {
        Ok(Outcome::Complete) => ("complete".to_string(), 0),
        Ok(Outcome::Partial(msg)) => {
            eprintln!("partial: {msg}");
            (format!("partial: {msg}"), 2)
        }
        Ok(Outcome::Failed(msg)) => {
            eprintln!("failed: {msg}");
            (format!("failed: {msg}"), 1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            (format!("error: {e}"), e.exit_code())
        }
    };
    m.finish(&status, code);
    if let Err(e) = m.emit(cli.manifest.as_deref()) {
        eprintln!("error: cannot write manifest: {e}");
        return ExitCode::from(if code == 0 { 1 } else { code as u8 });
    }
    ExitCode::from(code as u8)
}
