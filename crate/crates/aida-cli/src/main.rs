mod cli;
mod commands;
mod csvio;

use clap::Parser;
use cli::{Cli, Command};

fn main() {
    let parsed = Cli::try_parse().unwrap_or_else(|e| {
        // Help and version requests are not usage errors.
        if matches!(
            e.kind(),
            clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
        ) {
            e.exit();
        }
        eprint!("{e}");
        std::process::exit(1);
    });

    let result = match &parsed.command {
        Command::Optimize(args) => commands::optimize(args),
        Command::Stability(args) => commands::stability(args),
        Command::Suite(args) => commands::suite(args),
        Command::Sweep(args) => commands::sweep(args),
    };
    if let Err(e) = result {
        eprintln!("{e}");
        std::process::exit(e.exit_code());
    }
}
