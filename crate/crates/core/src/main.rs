use std::process::ExitCode;

fn main() -> ExitCode {
    movsrc::cli::run(std::env::args_os())
}
