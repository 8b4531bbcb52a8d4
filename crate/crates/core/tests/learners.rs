//! Learner guarantees: exactness, accuracy and query budgets, checked exhaustively.

mod common;

use bftest::boolfn::{cancel_monomials, distance, Distribution, FunctionSpec, Mask, Point, Repr};
use bftest::harness::random_member;
use bftest::learners::{
    find_minterm, learn_decision_list, learn_monotone, learn_poly_unif, learn_polynomial, mobius, monotone_budget,
    polynomial_budget, rivest_cover, LearnerParams,
};
use bftest::oracle::{Oracle, TargetOracle};
use bftest::boolfn::ClassSpec;
use common::{naive, rate};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const RUNS: usize = 50;
const HIGH: f64 = 0.9;

#[test]
fn minterms_are_satisfying_and_minimal() {
    let mut rng = ChaCha8Rng::seed_from_u64(501);
    let cls = ClassSpec::MonotoneDnf { s: 3, r: 3 };
    for _ in 0..200 {
        let f = random_member(&cls, 10, &mut rng).unwrap();
        let a = Point::new(10, rng.gen());
        if !f.evaluate(a) {
            continue;
        }
        let mut o = TargetOracle::uniform(f.clone());
        let m = find_minterm(&mut o, a).unwrap();
        assert!(f.evaluate(m));
        assert_eq!(m.bits() & !a.bits(), 0, "only clears bits");
        for i in 0..10 {
            if m.get(i) {
                assert!(!f.evaluate(m.with(i, false)), "clearing x{} keeps f = 1", i + 1);
            }
        }
        assert!(o.ledger().mq <= 1 + a.weight() as u64);
    }
}

#[test]
fn monotone_learner_recovers_a_disjunction() {
    let f = FunctionSpec::monotone_dnf(6, vec![0b1, 0b10]).unwrap();
    let p = LearnerParams { r: 1, ..LearnerParams::new(2, 0.1, 0.1) };
    let r = rate(RUNS, 502, |rng| {
        let mut o = TargetOracle::uniform(f.clone());
        match learn_monotone(&mut o, &p, rng) {
            Ok(h) => naive::table(&h.hypothesis) == naive::table(&f),
            Err(_) => false,
        }
    });
    assert!(r >= HIGH, "success rate {r}");
}

fn monomials(f: &FunctionSpec) -> Vec<Mask> {
    match f.repr() {
        Repr::SparsePoly(ms) => {
            let mut v = cancel_monomials(ms.clone());
            v.sort_unstable();
            v
        }
        other => panic!("not a polynomial: {other:?}"),
    }
}

#[test]
fn polynomial_learner_recovers_the_monomials() {
    let f = FunctionSpec::sparse_poly(8, vec![0b1, 0b110]).unwrap();
    let p = LearnerParams { d: 2, ..LearnerParams::new(2, 0.1, 0.1) };
    let dist = Distribution::product(vec![0.6; 8]).unwrap();
    let r = rate(RUNS, 503, |rng| {
        let mut o = TargetOracle::new(f.clone(), dist.clone());
        match learn_polynomial(&mut o, &p, rng) {
            Ok(h) => monomials(&h.hypothesis) == monomials(&f) && naive::table(&h.hypothesis) == naive::table(&f),
            Err(_) => false,
        }
    });
    assert!(r >= HIGH, "success rate {r}");
}

#[test]
fn uniform_polynomial_learner_recovers_a_parity() {
    let f = FunctionSpec::sparse_poly(8, vec![0b1, 0b10]).unwrap();
    let p = LearnerParams::new(2, 0.1, 0.1);
    let r = rate(RUNS, 504, |rng| {
        let mut o = TargetOracle::uniform(f.clone());
        learn_poly_unif(&mut o, &p, rng).is_ok_and(|h| naive::table(&h.hypothesis) == naive::table(&f))
    });
    assert!(r >= HIGH, "success rate {r}");
}

#[test]
fn a_heavy_monomial_may_be_dropped() {
    // One monomial of degree n - 1 is 1 on 2/1024 of the cube, so even h = 0 is accurate.
    let f = FunctionSpec::sparse_poly(10, vec![0b01_1111_1111]).unwrap();
    let p = LearnerParams::new(1, 0.3, 0.1);
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    for _ in 0..RUNS {
        let mut o = TargetOracle::uniform(f.clone());
        let h = learn_poly_unif(&mut o, &p, &mut rng).unwrap();
        assert!(distance(&f, &h.hypothesis, &Distribution::Uniform).unwrap() <= 0.3);
    }
}

#[test]
fn greedy_cover_is_consistent_with_its_sample() {
    // (x1 = 1 -> 1), (x2 = 0 -> 0), default 1, on all 16 points of n = 4.
    let f = bftest::boolfn::json::parse_function(
        r#"{"n": 4, "class": "decision_list", "body": {"rules": [[1, 1, 1], [2, 0, 0]], "default": 1}}"#,
    )
    .unwrap();
    let sample: Vec<(Point, bool)> = (0..16).map(|x| (Point::new(4, x), f.eval_bits(x))).collect();
    let h = rivest_cover(&sample, 4, 1, 2).unwrap();
    for (x, y) in &sample {
        assert_eq!(h.evaluate(*x), *y);
    }
}

/// Every table of a list of at most two single-literal rules over two variables.
fn all_short_lists() -> Vec<[bool; 4]> {
    let mut out = Vec::new();
    let lits: Vec<(usize, bool)> = vec![(0, false), (0, true), (1, false), (1, true)];
    let eval = |rules: &[(usize, bool, bool)], d: bool, x: usize| {
        rules.iter().find(|(v, xi, _)| (x >> v & 1 == 1) == *xi).map_or(d, |r| r.2)
    };
    for d in [false, true] {
        out.push([d; 4]);
        for &(v1, x1) in &lits {
            for o1 in [false, true] {
                let one = [(v1, x1, o1)];
                out.push(std::array::from_fn(|x| eval(&one, d, x)));
                for &(v2, x2) in &lits {
                    for o2 in [false, true] {
                        let two = [(v1, x1, o1), (v2, x2, o2)];
                        out.push(std::array::from_fn(|x| eval(&two, d, x)));
                    }
                }
            }
        }
    }
    out
}

#[test]
fn two_parity_has_no_short_list() {
    let parity = [false, true, true, false];
    assert!(all_short_lists().iter().all(|t| *t != parity));
    let sample: Vec<(Point, bool)> = (0..4).map(|x| (Point::new(2, x), parity[x as usize])).collect();
    assert!(rivest_cover(&sample, 2, 1, 2).is_err());
}

#[test]
fn decision_list_learner_is_accurate() {
    let f = bftest::boolfn::json::parse_function(
        r#"{"n": 10, "class": "decision_list", "body": {"rules": [[4, 0, 1], [1, 1, 0], [9, 1, 1]], "default": 0}}"#,
    )
    .unwrap();
    let r = rate(RUNS, 506, |rng| {
        let mut o = TargetOracle::uniform(f.clone());
        learn_decision_list(&mut o, 1, 3, 0.1, 0.1, false, rng)
            .is_ok_and(|h| distance(&f, &h.hypothesis, &Distribution::Uniform).unwrap() <= 0.1)
    });
    assert!(r >= HIGH, "success rate {r}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn mobius_is_an_involution(bits in proptest::collection::vec(any::<bool>(), 64)) {
        let mut t = bits.clone();
        mobius(&mut t);
        mobius(&mut t);
        prop_assert_eq!(t, bits);
    }

    #[test]
    fn learners_stay_within_budget(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 10;
        let mp = LearnerParams { r: 2, ..LearnerParams::new(2, 0.2, 0.1) };
        let f = random_member(&ClassSpec::MonotoneDnf { s: 2, r: 2 }, n, &mut rng).unwrap();
        let mut o = TargetOracle::uniform(f);
        let _ = learn_monotone(&mut o, &mp, &mut rng);
        let (l, b) = (o.ledger(), monotone_budget(&mp, n));
        prop_assert!(l.mq <= b.mq && l.exq <= b.exq);

        let pp = LearnerParams { d: 2, ..LearnerParams::new(2, 0.2, 0.1) };
        let f = random_member(&ClassSpec::SparsePoly { s: 2, d: 2 }, n, &mut rng).unwrap();
        let mut o = TargetOracle::uniform(f);
        let _ = learn_polynomial(&mut o, &pp, &mut rng);
        let (l, b) = (o.ledger(), polynomial_budget(&pp, n));
        prop_assert!(l.mq <= b.mq && l.exq <= b.exq);
    }
}
