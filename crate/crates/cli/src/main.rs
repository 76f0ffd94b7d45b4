use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = siph_cli::run(std::env::args_os());
    if !outcome.output.is_empty() {
        let text = outcome.output.as_bytes();
        let res = if outcome.code == siph_cli::EXIT_USAGE {
            std::io::stderr().write_all(text)
        } else {
            std::io::stdout().write_all(text)
        };
        if res.is_err() {
            return ExitCode::from(siph_cli::EXIT_USAGE as u8);
        }
    }
    ExitCode::from(outcome.code as u8)
}
