//! Testers for classes without a small junta bound: s-term DNF through the term-size
//! reduction and decision lists through the influence reduction, both under the uniform law.
//!
//! `cargo run --example reduction_testers`

use bftest::boolfn::{ClassSpec, FunctionSpec};
use bftest::oracle::TargetOracle;
use bftest::pipeline::{Model, PipelineParams};
use bftest::reduction::{approx_c, tester_approx_c, tester_decision_list, ReductionParams};
use bftest::boolfn::json::parse_function;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let params = PipelineParams::new(0.2, Model::Uniform);

    // A 2-term DNF with a long term: the long term is nearly always 0, so the shrink step
    // keeps only the short one.
    let f = FunctionSpec::dnf_from_literals(24, &[vec![1, 2], (5..=20).collect()]).unwrap();
    let red = ReductionParams::new(2);
    let mut o = TargetOracle::uniform(f.clone());
    let out = approx_c(&mut o, &red, 0.2, 6.0, &mut rng).unwrap();
    println!("kept mask {:024b} from blocks {:?}", out.restriction.mask, out.blocks);

    let mut o = TargetOracle::uniform(f);
    let run = tester_approx_c(&mut o, ClassSpec::Dnf { s: 2, term_cap: None }, &params, &red, &mut rng).unwrap();
    println!("2-term DNF: accepted={} stage={} queries={}", run.accepted, run.stage.key(), run.ledger.total());

    let parity = FunctionSpec::linear(24, 0b1111_0000).unwrap();
    let mut o = TargetOracle::uniform(parity);
    let run = tester_approx_c(&mut o, ClassSpec::Dnf { s: 2, term_cap: None }, &params, &red, &mut rng).unwrap();
    println!("4-parity:   accepted={} stage={} queries={}", run.accepted, run.stage.key(), run.ledger.total());

    let dl = parse_function(
        r#"{"n": 24, "class": "decision_list", "body": {"rules": [[3, 1, 1], [9, 0, 0], [15, 1, 1], [21, 1, 0]], "default": 1}}"#,
    )
    .unwrap();
    let mut o = TargetOracle::uniform(dl);
    let run = tester_decision_list(&mut o, 4, &params, &ReductionParams::new(4), &mut rng).unwrap();
    println!("decision list: accepted={} stage={} queries={}", run.accepted, run.stage.key(), run.ledger.total());
}
