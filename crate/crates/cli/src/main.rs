mod args;
mod commands;
mod corpus;
mod systems;

use clap::error::ErrorKind;
use clap::Parser;
use hyperrec::Error;

use args::{Cli, Command};
use commands::{execute, Config, Settings};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;

/// Capacity, insufficient depth and horizons the truncated system cannot
/// represent exit with 3; every other error is a usage error.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_capacity() || matches!(e, Error::TruncationArtifact { .. }) {
        EXIT_CAPACITY
    } else {
        EXIT_USAGE
    }
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    let config = match cli.config.as_deref().map(Config::load).transpose() {
        Ok(c) => c.unwrap_or_default(),
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    if let Command::Corpus(a) = &cli.command {
        return corpus::run(a, &config, cli.json.as_deref(), cli.quiet);
    }
    let settings = Settings::resolve(cli.budget, &config);
    let report = match execute(&cli.command, settings) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    if let Some(path) = &cli.json {
        if let Err(e) = std::fs::write(path, report.to_json()) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return EXIT_USAGE;
        }
    }
    let passed = report.passed();
    if !cli.quiet {
        print!("{}", report.summary());
    }
    println!("{}", if passed { "PASS" } else { "FAIL" });
    if passed {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}

fn main() {
    std::process::exit(run());
}
