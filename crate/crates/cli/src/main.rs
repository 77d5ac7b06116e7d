mod args;
mod commands;
mod output;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use args::{Cli, Command, Format};
use commands::{CliError, CliResult, Rendered};
use output::{document, Manifest};

const THREADS_ENV: &str = "PH_THREADS";

fn thread_count(cli: &Cli) -> CliResult<Option<usize>> {
    let n = match std::env::var(THREADS_ENV) {
        Ok(v) => Some(v.trim().parse::<usize>().map_err(|_| {
            CliError::Usage(format!(
                "{THREADS_ENV}: expected a positive integer, got '{v}'"
            ))
        })?),
        Err(_) => cli.threads,
    };
    if n == Some(0) {
        return Err(CliError::Usage("--threads must be at least 1".into()));
    }
    Ok(n)
}

fn dispatch(cli: &Cli) -> CliResult<Rendered> {
    match &cli.command {
        Command::Partitions(c) => commands::partitions(c),
        Command::Kernel(c) => commands::kernel(c),
        Command::Quadrature(a) => commands::quadrature(a),
        Command::Verify(a) => commands::verify(a),
        Command::Bench(a) => commands::bench(a),
    }
}

fn run(cli: &Cli, command: String) -> CliResult<bool> {
    let start = Instant::now();
    if let Some(n) = thread_count(cli)? {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Runtime(e.to_string()))?;
    }
    let rendered = dispatch(cli)?;
    for w in &rendered.warnings {
        eprintln!("warning: {w}");
    }
    let body = match cli.format() {
        Format::Text => rendered.text,
        Format::Csv => rendered.csv,
        Format::Json => {
            let manifest = Manifest {
                command,
                version: env!("CARGO_PKG_VERSION"),
                wall_time_ms: start.elapsed().as_millis() as u64,
                warnings: rendered.warnings,
            };
            document(&manifest, rendered.json)
        }
    };
    match &cli.out {
        Some(path) => std::fs::write(path, body)
            .map_err(|e| CliError::Runtime(format!("--out {}: {e}", path.display())))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(body.as_bytes())
                .and_then(|()| stdout.flush())
                .map_err(|e| CliError::Runtime(e.to_string()))?;
        }
    }
    Ok(rendered.passed)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    let command = std::env::args().skip(1).collect::<Vec<_>>().join(" ");
    match run(&cli, command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: verification failed");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
