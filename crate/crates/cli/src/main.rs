mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;
use incidence_core::Error;

fn main() -> ExitCode {
    let cli = args::Cli::parse();
    let outcome = match cli.workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n as usize)
            .build_global()
            .map_err(|e| Error::Input(format!("worker pool: {e}")))
            .and_then(|()| commands::run(&cli)),
        None => commands::run(&cli),
    };
    output::emit(cli.json, outcome)
}
