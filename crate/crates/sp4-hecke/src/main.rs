use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let args = sp4_hecke::cli::Cli::parse();
    match sp4_hecke::cli::run(args) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
