use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use thetastrat::cli::{run, RunConfig};

fn main() -> ExitCode {
    if let Ok(n) = std::env::var("THETASTRAT_THREADS") {
        match n.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => {
                eprintln!("error: THETASTRAT_THREADS must be a positive integer, found {n:?}");
                return ExitCode::from(3);
            }
        }
    }
    let cfg = match RunConfig::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    let out = run(&cfg);
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.code as u8)
}
