use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use necklace_cli::{run, Cli};

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let mut out = std::io::stdout().lock();
            if out
                .write_all(report.render(cli.opts.format).as_bytes())
                .is_err()
            {
                return ExitCode::from(1);
            }
            ExitCode::from(if report.success { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
