use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(qheun_cli::main_entry(std::env::args_os()))
}
