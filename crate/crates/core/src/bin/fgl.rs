use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use fgl_core::cli::{run, Cli, Guards, EXIT_INVALID};

#[derive(Parser)]
#[command(name = "fgl")]
struct Main {
    /// Write the report to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(flatten)]
    cli: Cli,
}

fn main() -> ExitCode {
    let args = Main::parse();
    let guards = match Guards::from_env() {
        Ok(g) => g,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_INVALID as u8);
        }
    };
    let outcome = run(&args.cli, guards);
    eprint!("{}", outcome.stderr);
    let written = match &args.output {
        Some(path) => std::fs::write(path, &outcome.stdout),
        None => std::io::stdout()
            .lock()
            .write_all(outcome.stdout.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::FAILURE;
    }
    ExitCode::from(outcome.code as u8)
}
