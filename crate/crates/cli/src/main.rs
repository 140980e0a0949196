use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use regval_cli::{run, Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if cli.opts.out.is_none() || cli.command == Command::Calibrate {
                let _ = std::io::stdout().lock().write_all(out.report.as_bytes());
            }
            ExitCode::from(out.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
