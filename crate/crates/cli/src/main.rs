use std::io::Write;

fn main() {
    let (code, output) = qcluster_cli::run(std::env::args_os());
    let _ = if code == 2 {
        std::io::stderr().write_all(output.as_bytes())
    } else {
        std::io::stdout().write_all(output.as_bytes())
    };
    std::process::exit(code);
}
