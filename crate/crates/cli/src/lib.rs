//! Command-line front end for `mtreg-core`: CSV ingestion, fits, intervals,
//! tests and coverage simulation, reported as JSON or text tables.

pub mod commands;
pub mod dataset;
pub mod error;
pub mod report;

pub use commands::{execute, render, Cli, Command, Format};
pub use dataset::{ingest_csv, Dataset};
pub use error::{CliError, Result};
pub use report::Report;

/// Parses `argv` (program name first), runs the command and renders its
/// report. Usage errors come back as [`CliError::Usage`] with clap's message.
pub fn run<I, S>(argv: I) -> Result<String>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    use clap::Parser;
    let argv: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let cli = Cli::try_parse_from(&argv).map_err(|e| CliError::Usage(e.render().to_string()))?;
    let echo: Vec<String> = argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let report = execute(&cli.command, &echo)?;
    Ok(render(&report, cli.format))
}
