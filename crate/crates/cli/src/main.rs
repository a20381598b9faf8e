use std::process::ExitCode;

use clap::Parser;
use iprox_cli::args::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match iprox_cli::run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
