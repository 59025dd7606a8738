use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use lagrangian_lab::cli::{output_path, run, thread_cap, Cli, EXIT_PARSE};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match thread_cap(std::env::var("LAB_THREADS").ok().as_deref()) {
        Ok(Some(n)) => {
            if let Err(e) = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
            {
                eprintln!("error: cannot configure thread pool: {e}");
                return ExitCode::from(EXIT_PARSE as u8);
            }
        }
        Ok(None) => {}
        Err(e) => {
            eprintln!("error: {}", e.message);
            return ExitCode::from(e.code as u8);
        }
    }
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {}", e.message);
            return ExitCode::from(e.code as u8);
        }
    };
    let written = match output_path(&cli) {
        Some(path) => std::fs::write(path, &outcome.report),
        None => std::io::stdout()
            .lock()
            .write_all(outcome.report.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write report: {e}");
        return ExitCode::from(EXIT_PARSE as u8);
    }
    if let Some(m) = &outcome.message {
        eprintln!("{m}");
    }
    ExitCode::from(outcome.code as u8)
}
