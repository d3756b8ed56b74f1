use std::io::Write;
use std::process::ExitCode;

use cauchylab_cli::io::write_text;
use cauchylab_cli::{emit_report, run_suite, CliError, RunConfig};

fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("CAUCHYLAB_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("CAUCHYLAB_THREADS must be a positive integer, got `{value}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn run() -> Result<bool, CliError> {
    configure_threads()?;
    let cfg = RunConfig::from_args(std::env::args_os())?;
    let out = run_suite(&cfg)?;
    let report = &out.report;
    match (&out.artifact, &cfg.output) {
        (Some(text), Some(path)) => write_text(path, text)?,
        (Some(text), None) => print!("{text}"),
        (None, Some(path)) => emit_report(report, path)?,
        (None, None) => println!("{}", report.to_canonical_json()),
    }
    if out.artifact.is_some() || cfg.output.is_some() {
        let failed = report.failures().count();
        eprintln!("{}: {} checks, {failed} failed", cfg.command.name(), report.checks.len());
    }
    for c in report.failures() {
        eprintln!("FAIL {}: {}", c.name, c.anchor);
    }
    Ok(report.all_pass())
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(std::io::stderr(), "{msg}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
