use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use negabase::cli::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match negabase::execute(&cli) {
        Ok((code, text)) => {
            if let Some(text) = text {
                let mut stdout = std::io::stdout().lock();
                if stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                    return ExitCode::from(1);
                }
            }
            ExitCode::from(code as u8)
        }
        Err(f) => {
            eprintln!("negabase: {}", f.message.lines().next().unwrap_or("error"));
            ExitCode::from(f.code as u8)
        }
    }
}
