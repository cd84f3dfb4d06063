use std::io::Write;
use std::process::ExitCode;

use zpbox_cli::{parse_scenario, run, CliError};

fn main() -> ExitCode {
    let scenario = match parse_scenario(std::env::args_os(), None) {
        Ok(s) => s,
        Err(CliError::Clap(e)) => e.exit(),
        Err(e) => return fail(&e),
    };
    match run(&scenario) {
        Ok(summary) => {
            let mut stdout = std::io::stdout().lock();
            let written = match (&scenario.out, &summary.table) {
                // No output directory: the series goes to stdout, the summary to stderr.
                (None, Some(table)) => {
                    eprint!("{}", summary.to_json());
                    stdout.write_all(table.as_bytes())
                }
                _ => stdout.write_all(summary.to_json().as_bytes()),
            };
            if let Err(e) = written {
                return fail(&CliError::Io(e));
            }
            eprintln!(
                "zpbox {}: done in {:.3} s",
                scenario.command,
                summary.duration.as_secs_f64()
            );
            ExitCode::SUCCESS
        }
        Err(e) => fail(&e),
    }
}

fn fail(e: &CliError) -> ExitCode {
    eprintln!("zpbox: {e}");
    ExitCode::from(e.exit_code() as u8)
}
