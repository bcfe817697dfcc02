use std::process::ExitCode;

fn main() -> ExitCode {
    let code = pathcover_cli::cli::main_with(std::env::args_os(), &mut std::io::stdout().lock());
    ExitCode::from(code as u8)
}
