use std::process::ExitCode;

fn main() -> ExitCode {
    match wehrl::cli::run(std::env::args_os()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("wehrl: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
