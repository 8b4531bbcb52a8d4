//! Fit a decision list to a labeled sample with the greedy cover learner, then run it
//! against an oracle.
//!
//! `cargo run --example learn_decision_list`

use bftest::boolfn::json::{function_to_value, parse_function};
use bftest::boolfn::{distance, Distribution};
use bftest::learners::{decision_list_budget, decision_list_sample_size, learn_decision_list};
use bftest::oracle::{Oracle, TargetOracle};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let f = parse_function(
        r#"{"n": 10, "class": "decision_list", "body": {"rules": [[2, 1, 1], [5, 0, 0], [7, 1, 1]], "default": 0}}"#,
    )
    .unwrap();
    let (eps, delta) = (0.05, 0.1);
    println!("sample size {}", decision_list_sample_size(10, 1, 3, eps, delta));
    let mut o = TargetOracle::uniform(f.clone());
    let h = learn_decision_list(&mut o, 1, 3, eps, delta, false, &mut rng).unwrap();
    println!("hypothesis {}", function_to_value(&h.hypothesis));
    println!("error {:.4}", distance(&f, &h.hypothesis, &Distribution::Uniform).unwrap());
    println!("ledger {:?}, budget {:?}", o.ledger(), decision_list_budget(10, 1, 3, eps, delta, false));
}
