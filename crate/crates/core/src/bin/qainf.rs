use std::process::ExitCode;

fn main() -> ExitCode {
    qainf::cli::run(std::env::args_os())
}
