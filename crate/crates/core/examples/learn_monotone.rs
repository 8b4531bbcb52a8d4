//! Learn a monotone DNF from membership queries and examples under a product law, and
//! compare the queries spent with the learner's worst-case budget.
//!
//! `cargo run --example learn_monotone`

use bftest::boolfn::json::function_to_value;
use bftest::boolfn::{distance, Distribution, FunctionSpec};
use bftest::learners::{learn_monotone, monotone_budget, LearnerParams};
use bftest::oracle::{Oracle, TargetOracle};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let f = FunctionSpec::monotone_dnf(12, vec![0b11, 0b1_1000, 0b1010_0000_0000]).unwrap();
    let dist = Distribution::product(vec![0.7; 12]).unwrap();
    let p = LearnerParams { r: 3, ..LearnerParams::new(3, 0.1, 0.1) };
    let mut o = TargetOracle::new(f.clone(), dist.clone());
    let h = learn_monotone(&mut o, &p, &mut rng).unwrap();
    println!("hypothesis {}", function_to_value(&h.hypothesis));
    println!("error {:.4}", distance(&f, &h.hypothesis, &dist).unwrap());
    println!("ledger {:?} within budget {:?}", o.ledger(), monotone_budget(&p, 12));
}
