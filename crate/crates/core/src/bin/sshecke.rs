use std::io;

fn main() {
    let code = supersingular_hecke::cli::run(std::env::args_os(), &mut io::stdout().lock(), &mut io::stderr().lock());
    std::process::exit(code);
}
