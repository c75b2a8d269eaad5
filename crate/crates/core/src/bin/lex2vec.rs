use std::io;
use std::process;

fn main() {
    let stdin = io::stdin();
    let mut stdin = stdin.lock();
    let mut stdout = io::stdout().lock();
    let mut stderr = io::stderr().lock();
    let code = lex2vec::cli::run(std::env::args_os(), &mut stdin, &mut stdout, &mut stderr);
    process::exit(code);
}
