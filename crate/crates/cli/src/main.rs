use std::process::ExitCode;

use clap::Parser;
use entwine::cli::{run, serve, Cli, Command};
use entwine::ApiError;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Serve { bind, allow_origin } => serve(&cli, *bind, allow_origin),
        _ => run(&cli).map(|out| println!("{}", out.render(cli.format))),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(&e),
    }
}

fn fail(e: &ApiError) -> ExitCode {
    eprintln!(
        "{}",
        serde_json::to_string(e).unwrap_or_else(|_| e.message.clone())
    );
    ExitCode::from(e.code.exit_code() as u8)
}
