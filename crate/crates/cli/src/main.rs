mod cli;
mod commands;
mod config;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use underapprox::Error;

use crate::cli::Cli;
use crate::config::Config;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::CapExceeded { .. } | Error::Incomplete { .. } => 3,
        Error::Verification(_) => 4,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = Config::resolve(&cli.global).and_then(|cfg| {
        let report = commands::run(&cli.command, &cfg)?;
        Ok((report.render(cfg.format)?, report.exit))
    });
    match result {
        Ok((text, code)) => {
            let mut out = std::io::stdout().lock();
            if out
                .write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .is_err()
            {
                return ExitCode::from(2);
            }
            if code == 3 {
                eprintln!("error: search incomplete or tie set truncated");
            }
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
