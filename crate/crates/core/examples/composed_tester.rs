//! The composed tester for a class: find relevant blocks, pin down one variable per block,
//! then compare the projected function with the class. Runs the same function under the
//! uniform law, a product law (distribution-free model) and the weak example model.
//!
//! `cargo run --example composed_tester`

use bftest::boolfn::{ClassSpec, Distribution, FunctionSpec};
use bftest::oracle::{TargetOracle, WeakExamples};
use bftest::pipeline::{tester_c, Model, PipelineParams};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let cls = ClassSpec::Term { k: 3 };
    let term = FunctionSpec::dnf_from_literals(20, &[vec![2, -9, 14]]).unwrap();
    let two_terms = FunctionSpec::dnf_from_literals(20, &[vec![2, 9], vec![-4, 14]]).unwrap();
    let product = Distribution::product(vec![0.6; 20]).unwrap();

    for (name, f) in [("term", &term), ("2-term DNF", &two_terms)] {
        let mut o = TargetOracle::uniform(f.clone());
        let run = tester_c(&mut o, cls, &PipelineParams::new(0.1, Model::Uniform), &mut rng).unwrap();
        println!("{name:>10} uniform: accepted={} stage={} queries={}", run.accepted, run.stage.key(), run.ledger.total());

        let mut o = TargetOracle::new(f.clone(), product.clone());
        let run = tester_c(&mut o, cls, &PipelineParams::new(0.1, Model::DistributionFree), &mut rng).unwrap();
        println!("{name:>10} dfree:   accepted={} stage={} queries={:?}", run.accepted, run.stage.key(), run.ledger);

        let mut t = TargetOracle::uniform(f.clone());
        let mut o = WeakExamples::new(&mut t);
        let run = tester_c(&mut o, cls, &PipelineParams::new(0.1, Model::Weak), &mut rng).unwrap();
        println!("{name:>10} weak:    accepted={} stage={} queries={:?}", run.accepted, run.stage.key(), run.ledger);
    }
}
