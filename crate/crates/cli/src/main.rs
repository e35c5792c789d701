use std::process::ExitCode;

use abrw_cli::args::{Cli, Command};
use abrw_cli::commands;
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    let result = match &cli.command {
        Command::Perturb(a) => commands::perturb(a),
        Command::Embed(a) => commands::embed_command(a),
        Command::Eval(a) => commands::eval_command(&a.task),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
