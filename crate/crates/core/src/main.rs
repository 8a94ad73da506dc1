use std::io::{self, Write};

use looplab::cli::{run, Io};

fn main() {
    let stdin = io::stdin();
    let stdout = io::stdout();
    let stderr = io::stderr();
    let mut out = io::BufWriter::new(stdout.lock());
    let code = run(
        std::env::args_os(),
        Io {
            stdin: &mut stdin.lock(),
            out: &mut out,
            err: &mut stderr.lock(),
        },
    );
    let _ = out.flush();
    std::process::exit(code);
}
