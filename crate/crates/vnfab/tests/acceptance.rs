//! One line per acceptance criterion; exits non-zero if any criterion fails.
//! Runs without the libtest harness so the table is never captured.

use std::process::ExitCode;

use vnfab::accept::{render, run_all};
use vnfab::config::Config;

fn main() -> ExitCode {
    let results = run_all(&Config::default());
    print!("{}", render(&results));
    let failed: Vec<String> = results
        .iter()
        .filter(|r| !r.pass)
        .map(|r| r.id.to_string())
        .collect();
    if results.len() != 12 {
        println!("acceptance: expected 12 criteria, got {}", results.len());
        return ExitCode::FAILURE;
    }
    if failed.is_empty() {
        println!("acceptance: 12/12 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {}", failed.join(", "));
        ExitCode::FAILURE
    }
}
