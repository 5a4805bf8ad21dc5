mod args;
mod config;
mod error;
mod output;
mod potential;
mod shape;
mod spectrum;
mod verify;
mod zero_mode;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use error::{CliError, CliResult};

fn init_threads() -> CliResult<()> {
    let Ok(value) = std::env::var("SUSYRAD_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::Config(format!("SUSYRAD_THREADS must be a positive integer, got `{value}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))
}

fn run() -> CliResult<()> {
    let argv = config::expand_args(std::env::args_os().collect())?;
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    init_threads()?;
    let (text, failed) = match &cli.command {
        Command::Spectrum(a) => spectrum::run(a, cli.units, cli.format)?,
        Command::Potential(a) => (potential::run(a, cli.units, cli.format)?, Vec::new()),
        Command::ZeroMode(a) => zero_mode::run(a, cli.units, cli.format)?,
        Command::ShapeInvariance(a) => shape::run(a, cli.units, cli.format)?,
        Command::Verify(a) => verify::run(a, cli.units, cli.format)?,
        Command::SpinorCheck(a) => verify::run_spinor(a, cli.format)?,
    };
    output::emit(&text, cli.output.as_deref())?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verification(failed.join("; ")))
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}
