use std::process::ExitCode;

fn main() -> ExitCode {
    listfec::cli::run(std::env::args_os())
}
