//! Sampling laws, weak example mixing and ledger accounting of the query oracles.

use bftest::boolfn::{Distribution, FunctionSpec, Point};
use bftest::oracle::{ConstantAdversary, Oracle, Restricted, TargetOracle, WeakExamples};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn uniform_marginal_of_first_bit() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut o = TargetOracle::uniform(FunctionSpec::constant(8, false));
    let draws = 100_000;
    let ones = (0..draws).filter(|_| o.exq(&mut rng).get(0)).count();
    let m = ones as f64 / draws as f64;
    assert!((m - 0.5).abs() <= 0.005, "marginal {m}");
    assert_eq!(o.ledger().exq, draws as u64);
}

#[test]
fn weak_draws_split_between_adversary_and_law() {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let one: Point = "1111".parse().unwrap();
    let zero: Point = "0000".parse().unwrap();
    let dist = Distribution::explicit(vec![(one, 1.0)]).unwrap();
    let mut o = TargetOracle::new(FunctionSpec::constant(4, true), dist)
        .with_adversary(Box::new(ConstantAdversary(zero)));
    let draws = 10_000;
    let mut zeros = 0;
    for _ in 0..draws {
        let x = o.wexq(&mut rng);
        assert!(x == one || x == zero);
        zeros += (x == zero) as usize;
    }
    let f = zeros as f64 / draws as f64;
    assert!((f - 0.5).abs() <= 0.02, "adversary share {f}");
    assert_eq!(o.ledger().wexq, draws as u64);
}

#[test]
fn every_call_is_charged_once_through_wrappers() {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let mut t = TargetOracle::uniform(FunctionSpec::linear(6, 0b11).unwrap());
    let x = Point::new(6, 0b1);
    for _ in 0..3 {
        t.mq(x);
    }
    {
        let mut r = Restricted::new(&mut t, 0b11, Point::zeros(6));
        r.mq(x);
        r.exq(&mut rng);
        let mut w = WeakExamples::new(&mut r);
        w.exq(&mut rng);
        w.exq(&mut rng);
    }
    let l = t.ledger();
    assert_eq!((l.mq, l.exq, l.wexq), (4, 1, 2));
    assert_eq!(l.total(), 7);
}

#[test]
fn restriction_answers_from_the_background() {
    let f = FunctionSpec::dnf_from_literals(6, &[vec![1, 6]]).unwrap();
    let mut t = TargetOracle::uniform(f.clone());
    let bg = Point::new(6, 0b10_0000);
    let mut r = Restricted::new(&mut t, 0b1, bg);
    for bits in 0..64 {
        let x = Point::new(6, bits);
        assert_eq!(r.mq(x), f.evaluate(x.splice(0b1, bg)));
    }
}
