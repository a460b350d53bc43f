//! Command-line driver: problem generation, solves, comparison tables and
//! flux export.

pub mod args;
pub mod commands;
pub mod error;
pub mod export;

use args::{Cli, Command};
use error::CliResult;

/// Runs a parsed command line inside a thread pool of the requested size.
pub fn run(cli: &Cli) -> CliResult<i32> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.global.threads)
        .build()
        .map_err(|e| error::CliError::Usage(format!("cannot build thread pool: {e}")))?;
    pool.install(|| match &cli.command {
        Command::Solve(a) => commands::cmd_solve(&cli.global, a),
        Command::Compare(a) => commands::cmd_compare(&cli.global, a),
        Command::Gen(a) => commands::cmd_gen(&cli.global, a),
    })
}

/// Parses `argv`, runs, prints any error, and returns the exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    use clap::Parser;
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { error::EXIT_FAILURE } else { error::EXIT_OK };
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
