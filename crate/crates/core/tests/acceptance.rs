//! One pass/fail line per acceptance criterion; exits non-zero if any fails.

mod common;

use bftest::harness::acceptance::run_all;

fn main() {
    let results = run_all(&common::naive::SECOND);
    for r in &results {
        println!("{r}");
    }
    if results.iter().any(|r| !r.passed) {
        std::process::exit(1);
    }
}
