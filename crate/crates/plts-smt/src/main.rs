//! Command-line entry point: reads an SMT-LIB script from stdin and
//! prints the solver's responses to stdout.

use std::io::{Read, Write};

fn main() {
    let mut input = String::new();
    if let Err(e) = std::io::stdin().read_to_string(&mut input) {
        eprintln!("failed to read stdin: {e}");
        std::process::exit(2);
    }
    match plts_smt::run_script(&input) {
        Ok(out) => {
            let mut stdout = std::io::stdout();
            let _ = stdout.write_all(out.as_bytes());
            let _ = stdout.flush();
        }
        Err(e) => {
            println!("(error \"{e}\")");
            std::process::exit(1);
        }
    }
}
