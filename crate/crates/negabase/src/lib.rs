//! Command-line front end for `negabase-core`: argument parsing, JSON/CSV
//! rendering and file output.

pub mod cli;
pub mod commands;
pub mod output;
pub mod render;

use cli::Cli;
use commands::{io_failure, Failure};

/// Runs a parsed command line. Output goes to `--out` when given, otherwise
/// it is returned for printing. Returns the process exit code.
pub fn execute(cli: &Cli) -> Result<(i32, Option<String>), Failure> {
    let outcome = commands::run(&cli.command)?;
    match &outcome.out {
        Some(path) => {
            output::write_atomic(path, &outcome.text).map_err(|e| io_failure(e, &path.display().to_string()))?;
            Ok((outcome.code, None))
        }
        None => Ok((outcome.code, Some(outcome.text))),
    }
}
