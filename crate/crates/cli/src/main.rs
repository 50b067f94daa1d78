use std::process::ExitCode;

use clap::Parser;
use ppr_cli::{exit_code, run, Args, EXIT_CONFIG};
use ppr_core::exec::Exec;

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_CONFIG) } else { ExitCode::SUCCESS };
        }
    };
    match run(&args, Exec::default()) {
        Ok(report) => {
            println!("{} rows written to {}", report.rows.len(), args.out.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
