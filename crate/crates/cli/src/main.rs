use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use ekchain_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let outcome = run(&cli);
    if let Some(report) = &outcome.report {
        let mut out = std::io::stdout().lock();
        let _ = out.write_all(report.render(cli.format).as_bytes());
    }
    if let Some(err) = &outcome.error {
        eprintln!("error: {err}");
    }
    ExitCode::from(outcome.code as u8)
}
