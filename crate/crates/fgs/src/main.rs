use clap::Parser;

use fgs::cli::{exit_code, run, Cli};

fn main() {
    let cli = Cli::parse();
    let outcome = run(cli);
    let code = exit_code(&outcome);
    match outcome {
        Ok(out) => print!("{}", out.stdout),
        Err(e) => eprintln!("error: {e}"),
    }
    std::process::exit(code);
}
