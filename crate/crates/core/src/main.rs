use std::io::Write;

fn main() {
    let out = superext::cli::run(std::env::args_os());
    let mut stdout = std::io::stdout().lock();
    if out.code == superext::cli::EXIT_OK || out.code == superext::cli::EXIT_VERIFY {
        let _ = stdout.write_all(out.text.as_bytes());
    } else {
        let _ = std::io::stderr().write_all(out.text.as_bytes());
    }
    let _ = stdout.flush();
    std::process::exit(out.code);
}
