use std::io;
use std::process::ExitCode;

use compmetrics::cli::{run, Env};

fn main() -> ExitCode {
    let args: Vec<_> = std::env::args_os().collect();
    let code = run(
        &args,
        &Env::from_process(),
        &mut io::stdout(),
        &mut io::stderr(),
    );
    ExitCode::from(code as u8)
}
