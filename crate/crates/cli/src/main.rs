use std::io::Write;

fn main() {
    let outcome = sigev_cli::run(std::env::args_os());
    let _ = std::io::stdout().write_all(&outcome.stdout);
    let _ = std::io::stderr().write_all(&outcome.stderr);
    std::process::exit(outcome.code);
}
