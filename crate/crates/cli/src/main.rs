use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use vdm_cli::{exit_code, is_broken_pipe, run, Cli, Status, EXIT_FAIL, EXIT_OK};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.global.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let code = match run(&cli, &mut out) {
        Ok(Status::Ok) => EXIT_OK,
        Ok(Status::Fail) => EXIT_FAIL,
        Err(e) if is_broken_pipe(&e) => EXIT_OK,
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e:#}");
            exit_code(&e)
        }
    };
    let _ = out.flush();
    ExitCode::from(code as u8)
}
