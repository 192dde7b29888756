use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use skewrate::cli::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let code = match skewrate::run(&cli, &mut out) {
        Ok(status) => status.code(),
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {}", e);
            e.code()
        }
    };
    let _ = out.flush();
    ExitCode::from(code)
}
