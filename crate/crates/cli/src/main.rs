use std::process::ExitCode;

use clap::Parser;

mod args;
mod commands;
mod io;

use args::{Cli, Command};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("SUBDIV_LOG", "warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Refine(a) => commands::refine(a),
        Command::Experiment(a) => commands::experiment(a),
        Command::ExportSvg(a) => commands::export_svg(a),
        Command::Analyze(a) => commands::analyze(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
