//! The full acceptance suite, one line per criterion.
//!
//! Runs without the libtest harness so the table is always printed.

use std::process::ExitCode;

use quasilab::verify::{run_all, VerifyConfig, CRITERIA};

fn main() -> ExitCode {
    let results = run_all(&VerifyConfig::default());
    assert_eq!(results.len(), CRITERIA as usize);
    for r in &results {
        println!("{}  [{:.2?}]", r.line(), r.elapsed);
    }
    let failed: Vec<u32> = results.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    println!("{}/{} criteria passed", results.len() - failed.len(), results.len());
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        eprintln!("failed criteria: {failed:?}");
        ExitCode::FAILURE
    }
}
