use std::io::Write;

fn main() {
    let outcome = jacpoly::cli::run_args(std::env::args_os());
    let mut out = std::io::stdout().lock();
    // a closed pipe is not worth a panic
    let _ = out.write_all(outcome.render().as_bytes());
    let _ = out.flush();
    std::process::exit(outcome.code);
}
