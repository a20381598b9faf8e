//! Library side of the `iprox` command-line tool: configuration, batch
//! execution and artifact writers. `main.rs` only parses and dispatches.

pub mod args;
pub mod artifacts;
pub mod commands;
pub mod config;
pub mod error;
pub mod runner;

use args::{Cli, Command};
use config::RunConfig;
use error::CliError;
use iprox::validate::ValidationOptions;

/// Executes a parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Solve(args) => {
            let cfg = args.to_config()?;
            let threads = args.threads.unwrap_or_else(runner::default_threads);
            let outcome = commands::solve(&cfg, threads)?;
            print!("{}", commands::solve_table(&outcome.runs));
            println!("artifacts written to {}", outcome.out_dir.display());
            Ok(outcome.exit_code)
        }
        Command::ReproduceRosenbrock(args) => {
            let cfg = RunConfig { out_dir: args.out_dir, ..RunConfig::default() };
            let out_dir = cfg.resolved_out_dir();
            let threads = args.threads.unwrap_or_else(runner::default_threads);
            let outcome = commands::reproduce_rosenbrock(&out_dir, threads)?;
            print!("{}", commands::reproduce_table(&outcome));
            println!("artifacts written to {}", out_dir.display());
            Ok(outcome.exit_code)
        }
        Command::Validate(args) => {
            let opts = ValidationOptions { points: args.points, seed: args.seed, ..ValidationOptions::default() };
            let report = commands::validate(&args.problem, &args.barrier, &opts)?;
            if args.json {
                println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            } else {
                print!("{}", commands::validation_table(&report));
            }
            commands::require_passed(&args.problem, &report)?;
            Ok(0)
        }
        Command::ListProblems => {
            print!("{}", commands::list_problems());
            Ok(0)
        }
    }
}
