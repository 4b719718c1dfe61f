use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

mod cli;

fn main() -> ExitCode {
    let out = cli::dispatch(cli::Cli::parse());
    // errors go to stderr, reports (passing or not) to stdout
    let _ = if out.text.starts_with("error:") {
        writeln!(std::io::stderr(), "{}", out.text)
    } else {
        writeln!(std::io::stdout(), "{}", out.text)
    };
    ExitCode::from(out.code)
}
