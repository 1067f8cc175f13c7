use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use regudist_cli::{run, CliError, Command, Format, RunConfig};

/// Distributions with regulated test functions and games with
/// discontinuous payoffs.
///
/// Exit status: 0 success, 1 internal error, 2 invalid input, 3 no
/// solution found.
#[derive(Parser, Debug)]
#[command(name = "regudist", version)]
struct Args {
    command: Command,
    /// JSON input; `-` or absent reads stdin.
    #[arg(long, short)]
    input: Option<PathBuf>,
    /// Report destination; absent writes stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long, default_value_t = 101)]
    grid: usize,
    #[arg(long, default_value_t = 1e-3)]
    eps: f64,
    #[arg(long, default_value_t = 1000)]
    kmax: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Defaults to csv for deltaseq and json otherwise.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

fn read_input(path: &Option<PathBuf>) -> Result<String, CliError> {
    match path {
        Some(p) if p.as_os_str() != "-" => {
            std::fs::read_to_string(p).map_err(|e| CliError::Schema(format!("cannot read {}: {e}", p.display())))
        }
        _ => std::io::read_to_string(std::io::stdin()).map_err(|e| CliError::Schema(format!("cannot read stdin: {e}"))),
    }
}

fn set_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("REGUDIST_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().map_err(|_| CliError::Schema(format!("REGUDIST_THREADS={v:?} is not a count")))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Internal(e.to_string()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    let cfg = RunConfig {
        command: args.command,
        grid_n: args.grid,
        eps: args.eps,
        kmax: args.kmax,
        seed: args.seed,
        format: args.format,
    };
    let result = set_threads().and_then(|_| read_input(&args.input)).and_then(|text| {
        std::panic::catch_unwind(|| run(&cfg, &text))
            .unwrap_or_else(|_| Err(CliError::Internal("invariant violated, see the message above".into())))
    });
    let report = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("regudist: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let written = match &args.output {
        Some(p) => std::fs::write(p, report.body.as_bytes()).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => {
            print!("{report}");
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("regudist: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(report.exit_code() as u8)
}
