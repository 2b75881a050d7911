mod args;
mod commands;
mod manifest;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};

fn subcommand_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Bounds { .. } => "bounds",
        Command::Gap { .. } => "gap",
        Command::Rd(_) => "rd",
        Command::Simulate { .. } => "simulate",
        Command::Region { .. } => "region",
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
            let _ = e.print();
            return ExitCode::from(2);
        }
        Err(e) => {
            let rendered = e.render().to_string();
            let line = rendered.lines().next().unwrap_or("error: invalid arguments");
            eprintln!("{line}");
            return ExitCode::from(2);
        }
    };

    let outcome = match commands::run(&cli.command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {}", e.message());
            return ExitCode::from(e.exit_code());
        }
    };

    if let Some(path) = &cli.manifest {
        let text = manifest::render(
            subcommand_name(&cli.command),
            &argv[1..],
            &format!("{:?}", cli.command),
            outcome.seed,
            &outcome.stdout,
        );
        if let Err(e) = std::fs::write(path, text) {
            eprintln!("error: --manifest: cannot write {}: {e}", path.display());
            return ExitCode::from(3);
        }
    }

    let mut stdout = std::io::stdout().lock();
    if stdout.write_all(outcome.stdout.as_bytes()).and_then(|_| stdout.flush()).is_err() {
        return ExitCode::from(3);
    }
    ExitCode::from(outcome.code)
}
