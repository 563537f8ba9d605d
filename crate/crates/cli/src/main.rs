use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use mtreg_cli::{execute, render, Cli, CliError};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help and version go to stdout with status 0
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let echo: Vec<String> = std::env::args().skip(1).collect();
    let result = execute(&cli.command, &echo).and_then(|report| {
        let mut out = std::io::stdout().lock();
        out.write_all(render(&report, cli.format).as_bytes())
            .and_then(|_| out.flush())
            .map_err(|e| CliError::Output(e.to_string()))
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mtreg: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
