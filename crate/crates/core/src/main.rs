mod cli;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use cli::{Cli, Failure};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("KKV_LOG")).init();
    let args = Cli::parse();
    let outcome = match cli::run(&args) {
        Ok(o) => o,
        Err(f) => return fail(&f),
    };
    let written = match &args.out {
        Some(path) => std::fs::write(path, &outcome.text).map_err(|e| format!("{}: {e}", path.display())),
        None => std::io::stdout().write_all(outcome.text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        return fail(&Failure::Usage(format!("cannot write output: {e}")));
    }
    match outcome.failure {
        Some(f) => fail(&f),
        None => ExitCode::SUCCESS,
    }
}

fn fail(f: &Failure) -> ExitCode {
    eprintln!("kkv: {}", f.message());
    ExitCode::from(f.code() as u8)
}
