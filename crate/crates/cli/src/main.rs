use std::io::Write;

fn main() {
    let out = ttocheck::run(std::env::args_os());
    let mut stdout = std::io::stdout().lock();
    // written once, after all work is done
    let _ = stdout.write_all(out.stdout.as_bytes());
    let _ = stdout.flush();
    std::process::exit(out.code);
}
