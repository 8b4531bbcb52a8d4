//! Exact classification of instances against a class, and generation of random members
//! and certified far instances.
//!
//! `cargo run --example instances`

use bftest::boolfn::json::function_to_value;
use bftest::boolfn::{ClassSpec, Distribution, FunctionSpec};
use bftest::harness::{classify_instance, generate_instance, Want};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let u = Distribution::Uniform;
    let parity = FunctionSpec::linear(6, 0b111).unwrap();
    println!("parity-3 vs 1-juntas: {:?}", classify_instance(&parity, &ClassSpec::Junta { k: 1 }, 0.2, &u));
    println!("parity-3 vs 3-juntas: {:?}", classify_instance(&parity, &ClassSpec::Junta { k: 3 }, 0.2, &u));

    let cls = ClassSpec::Dnf { s: 2, term_cap: None };
    let m = generate_instance(&cls, 10, Want::Member, 0.15, &u, &mut rng).unwrap();
    println!("member: {}", function_to_value(&m));
    let far = generate_instance(&cls, 10, Want::Far, 0.15, &u, &mut rng).unwrap();
    println!("far: {:?}", classify_instance(&far, &cls, 0.15, &u));
}
