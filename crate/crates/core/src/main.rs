use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = weylforge::cli::run_command(std::env::args_os());
    if !outcome.stdout.is_empty() {
        let mut out = std::io::stdout().lock();
        let _ = writeln!(out, "{}", outcome.stdout.trim_end_matches('\n'));
    }
    if !outcome.stderr.is_empty() {
        eprintln!("{}", outcome.stderr.trim_end_matches('\n'));
    }
    ExitCode::from(outcome.code as u8)
}
