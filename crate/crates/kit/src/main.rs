use std::process::ExitCode;

use clap::Parser;
use melnikov_kit::cli::{run, JobConfig};

fn main() -> ExitCode {
    let cfg = JobConfig::parse();
    match run(&cfg) {
        Ok(out) => {
            if let Some(path) = &cfg.out {
                if let Err(e) = std::fs::write(path, &out.text) {
                    eprintln!("error: {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(out.status as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
