//! Learn sparse F2 polynomials two ways: the degree-bounded learner under a product law and
//! the uniform learner that needs no degree bound.
//!
//! `cargo run --example learn_polynomial`

use bftest::boolfn::json::function_to_value;
use bftest::boolfn::{distance, Distribution, FunctionSpec};
use bftest::learners::{learn_poly_unif, learn_polynomial, poly_unif_budget, polynomial_budget, LearnerParams};
use bftest::oracle::{Oracle, TargetOracle};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let f = FunctionSpec::sparse_poly(12, vec![0b11, 0b1_0000, 0b1110_0000_0000]).unwrap();

    let dist = Distribution::product(vec![0.7; 12]).unwrap();
    let p = LearnerParams { d: 3, ..LearnerParams::new(3, 0.1, 0.1) };
    let mut o = TargetOracle::new(f.clone(), dist.clone());
    let h = learn_polynomial(&mut o, &p, &mut rng).unwrap();
    println!("degree-bounded: {}", function_to_value(&h.hypothesis));
    println!("  error {:.4}, ledger {:?}, budget {:?}", distance(&f, &h.hypothesis, &dist).unwrap(), o.ledger(), polynomial_budget(&p, 12));

    let p = LearnerParams::new(3, 0.1, 0.1);
    let mut o = TargetOracle::uniform(f.clone());
    let h = learn_poly_unif(&mut o, &p, &mut rng).unwrap();
    println!("uniform: {}", function_to_value(&h.hypothesis));
    println!(
        "  error {:.4}, ledger {:?}, budget {:?}",
        distance(&f, &h.hypothesis, &Distribution::Uniform).unwrap(),
        o.ledger(),
        poly_unif_budget(&p, 12)
    );
}
