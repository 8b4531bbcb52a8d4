//! Query access and accounting: membership and example queries on a hidden target, a
//! restriction wrapper and the weak example model with an adversary.
//!
//! `cargo run --example oracles`

use bftest::boolfn::{Distribution, FunctionSpec, Point};
use bftest::oracle::{ConstantAdversary, Oracle, Restricted, TargetOracle, WeakExamples};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let f = FunctionSpec::dnf_from_literals(8, &[vec![1, 2], vec![-3, 5]]).unwrap();
    let dist = Distribution::product(vec![0.8; 8]).unwrap();
    let mut o = TargetOracle::new(f.clone(), dist);

    let x = Point::new(8, 0b11);
    println!("mq({x}) = {}", o.mq(x));
    for _ in 0..3 {
        let e = o.exq(&mut rng);
        println!("exq -> {e}");
    }
    println!("ledger {:?}", o.ledger());

    // Pin x3..x8 to zero: only x1, x2 stay free. Queries still land on the target's ledger.
    {
        let mut r = Restricted::new(&mut o, 0b11, Point::zeros(8));
        println!("restricted mq(11111111) = {}", r.mq(Point::ones(8)));
    }
    println!("ledger {:?}", o.ledger());

    // Weak examples: half the draws come from the adversary, here always the all-ones point.
    let mut t = TargetOracle::uniform(f).with_adversary(Box::new(ConstantAdversary(Point::ones(8))));
    let mut w = WeakExamples::new(&mut t);
    let ones = (0..1000).filter(|_| w.exq(&mut rng) == Point::ones(8)).count();
    println!("weak draws equal to 11111111: {ones}/1000, ledger {:?}", w.ledger());
}
