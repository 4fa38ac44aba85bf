use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use plumbhf_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let settings = cli.settings();
    match run(&settings, &cli.command) {
        Ok(outcome) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(outcome.render(settings.json).as_bytes());
            if let plumbhf_cli::Payload::Check { problems, .. } = &outcome.report.result {
                if outcome.status != 0 {
                    for p in problems {
                        eprintln!("error: {p}");
                    }
                }
            }
            ExitCode::from(outcome.status as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            if let Some(hint) = e.hint() {
                eprintln!("hint: {hint}");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
