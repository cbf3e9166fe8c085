//! Runs the nine acceptance criteria and prints one line per criterion.

use std::process::ExitCode;

use unirow::suite::{run_suite, DEFAULT_SEED};

fn main() -> ExitCode {
    let report = run_suite("all", DEFAULT_SEED).expect("suite 'all' exists");
    println!("\nacceptance (seed {:#x})", report.seed);
    for c in &report.criteria {
        println!("{}", c.line());
    }
    let failed = report.criteria.iter().filter(|c| !c.passed).count();
    println!("acceptance: {} passed, {} failed\n", report.criteria.len() - failed, failed);
    if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
