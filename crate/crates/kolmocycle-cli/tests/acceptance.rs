//! One line per acceptance criterion; exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use kolmocycle_cli::verify::run_all;

fn main() -> ExitCode {
    let start = Instant::now();
    let report = run_all();
    println!();
    for c in &report.criteria {
        println!("{}", c.line());
    }
    println!("\nacceptance: {} passed, {} failed in {:.2} s\n", report.passed, report.failed, start.elapsed().as_secs_f64());
    if report.failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
