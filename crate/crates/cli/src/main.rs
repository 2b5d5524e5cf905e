use std::process::ExitCode;

use clap::Parser;

use tamenorm_cli::{run, Cli, CliError, EXIT_USAGE};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("tamenorm: {e}");
            return ExitCode::from(EXIT_USAGE as u8);
        }
    };
    match &cli.out {
        Some(path) => {
            if let Err(source) = std::fs::write(path, &outcome.text) {
                let e = CliError::Io { path: path.display().to_string(), source };
                eprintln!("tamenorm: {e}");
                return ExitCode::from(EXIT_USAGE as u8);
            }
        }
        None => print!("{}", outcome.text),
    }
    ExitCode::from(outcome.exit as u8)
}
