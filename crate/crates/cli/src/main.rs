use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use superinv_cli::{resolve, run_command, Cli, EXIT_USAGE};

fn main() -> ExitCode {
    let outcome = match resolve(Cli::parse()) {
        Ok(config) => run_command(&config),
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_USAGE as u8);
        }
    };
    print!("{}", outcome.stdout);
    eprint!("{}", outcome.stderr);
    std::io::stdout().flush().ok();
    ExitCode::from(outcome.code as u8)
}
