use std::process::ExitCode;

use clap::Parser;
use spsym_cli::{exit_code, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli.command);
    let code = exit_code(&result);
    match &result {
        Ok(report) => {
            let text = report.to_json();
            match &report.config.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, text + "\n") {
                        eprintln!("cannot write {}: {e}", path.display());
                        return ExitCode::from(spsym_cli::EXIT_ERROR as u8);
                    }
                }
                None => println!("{text}"),
            }
            for b in report.blocks.iter().filter(|b| !b.pass) {
                eprintln!("FAIL {}", b.name);
            }
        }
        Err(e) => eprintln!("{e}"),
    }
    ExitCode::from(code as u8)
}
