//! `abp-lab`: command-line front end of the ABP proof-trace laboratory.
//!
//! Exit codes: 0 when every certificate link passes, 1 when a link fails or
//! the pipeline errors, 2 on configuration errors. Errors are also written to
//! stderr as one JSON object.

mod args;
mod run;
mod svg;

use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = args::Cli::parse();
    match run::execute(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("{}", f.to_json());
            ExitCode::from(f.exit_code())
        }
    }
}
