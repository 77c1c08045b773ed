use std::io::Write;

fn main() {
    let out = pervchow::cli::run(std::env::args().skip(1));
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(out.stdout.as_bytes());
    if !out.stdout.ends_with('\n') {
        let _ = stdout.write_all(b"\n");
    }
    let _ = stdout.flush();
    std::process::exit(out.code);
}
