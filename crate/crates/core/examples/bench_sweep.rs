//! A small query-count sweep over k and epsilon for the junta tester, basic and improved
//! paths, printed as CSV.
//!
//! `cargo run --example bench_sweep`

use bftest::harness::{run_bench, BenchGrid};
use bftest::pipeline::Model;

fn main() {
    let grid = BenchGrid {
        class: "junta".into(),
        sizes: vec![2, 4, 8],
        epsilons: vec![0.1, 0.2],
        improved: vec![false, true],
        n: Some(24),
        trials: 8,
        seed: 3,
        model: Model::Uniform,
    };
    let mut w = csv::Writer::from_writer(std::io::stdout());
    for row in run_bench(&grid).unwrap() {
        w.serialize(row).unwrap();
    }
    w.flush().unwrap();
}
