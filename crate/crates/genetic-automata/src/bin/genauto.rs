use std::process::ExitCode;

use genetic_automata::cli::{self, ParseOutcome};

fn main() -> ExitCode {
    let parsed = match cli::parse_config(std::env::args_os()) {
        Ok(parsed) => parsed,
        Err(error) => {
            eprintln!("error: {error}");
            return ExitCode::from(error.exit_code() as u8);
        }
    };
    match parsed {
        ParseOutcome::Exit { message } => {
            println!("{message}");
            ExitCode::SUCCESS
        }
        ParseOutcome::Run {
            config,
            print_config,
        } => {
            if print_config {
                print!("{}", config.echo());
                return ExitCode::SUCCESS;
            }
            match cli::run(&config) {
                Ok(_) => ExitCode::SUCCESS,
                Err(error) => {
                    eprintln!("error: {error}");
                    ExitCode::from(error.exit_code() as u8)
                }
            }
        }
    }
}
