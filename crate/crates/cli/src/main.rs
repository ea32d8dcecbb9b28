use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use nkoszul_cli::{run, Cli, RunConfig};

fn main() -> ExitCode {
    let config = RunConfig::from(Cli::parse().command);
    match run(&config) {
        Ok(report) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(report.render(config.format).as_bytes());
            for w in &report.warnings {
                if config.format != nkoszul_cli::OutputFormat::Table {
                    eprintln!("warning: {w}");
                }
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
