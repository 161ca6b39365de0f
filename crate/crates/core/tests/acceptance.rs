//! Runs every acceptance criterion, printing one verdict line each (with
//! the individual checks underneath), and fails if any criterion fails.

use std::process::ExitCode;

use walshlog::acceptance;
use walshlog::Parallelism;

fn main() -> ExitCode {
    let mut failed = Vec::new();
    for id in 1..=10 {
        match acceptance::run(id, Parallelism::Parallel) {
            Ok(outcome) => {
                println!("{outcome}");
                if !outcome.passed() {
                    failed.push(id);
                }
            }
            Err(e) => {
                println!("criterion {id:>2} FAIL  error: {e}");
                failed.push(id);
            }
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 10 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing criteria {failed:?}");
        ExitCode::FAILURE
    }
}
