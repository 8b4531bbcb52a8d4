//! Junta test and block procedures, checked against brute-force ground truth.

mod common;

use bftest::boolfn::{full_mask, ClassSpec, Distribution, FunctionSpec, Mask, Point};
use bftest::harness::table_tree;
use bftest::junta::{
    approx_target, approx_target_on, eval_f, rel_var_values, test_sets, uniform_junta, ApproxVariant, JuntaVerdict,
    RelevantSetRecord, TesterParams,
};
use bftest::oracle::{Oracle, TargetOracle};
use bftest::partition::Partition;
use common::{brute_record, forced_partition, mask_of, naive, rate};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TRIALS: usize = 200;
const HIGH: f64 = 0.9;

#[test]
fn a_literal_always_passes_the_one_junta_test() {
    let f = FunctionSpec::dnf_from_literals(20, &[vec![1]]).unwrap();
    let r = rate(TRIALS, 301, |rng| {
        let mut o = TargetOracle::uniform(f.clone());
        uniform_junta(&mut o, 1, 0.2, 0.1, rng) == JuntaVerdict::Accept
    });
    assert_eq!(r, 1.0);
}

#[test]
fn three_parity_fails_the_one_junta_test() {
    // Uniform distance is unchanged by padding, so certify on four variables.
    let small = FunctionSpec::linear(4, 0b111).unwrap();
    let d = naive::distance_to_class(&small, &ClassSpec::Junta { k: 1 }, &Distribution::Uniform).unwrap();
    assert!(d >= 0.2);
    let f = FunctionSpec::linear(20, mask_of(&[2, 9, 17])).unwrap();
    let r = rate(TRIALS, 302, |rng| {
        let mut o = TargetOracle::uniform(f.clone());
        match uniform_junta(&mut o, 1, 0.2, 0.1, rng) {
            JuntaVerdict::Accept => false,
            JuntaVerdict::Reject(ev) => {
                assert_eq!(ev.len(), 2);
                let union = ev.iter().fold(0, |m, e| {
                    assert_eq!(m & e.block, 0, "evidence blocks are disjoint");
                    m | e.block
                });
                assert_ne!(union, 0);
                for e in &ev {
                    assert_eq!((e.a.bits() ^ e.b.bits()) & !e.block, 0);
                    assert_ne!(f.evaluate(e.a), f.evaluate(e.b));
                }
                true
            }
        }
    });
    assert!(r >= HIGH, "reject rate {r}");
}

#[test]
fn constant_gives_an_empty_record() {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let mut o = TargetOracle::uniform(FunctionSpec::constant(12, false));
    let rec = approx_target(&mut o, &TesterParams::new(3, 0.2), ApproxVariant::Basic, &mut rng).unwrap();
    assert_eq!((rec.mask, rec.q()), (0, 0));
}

#[test]
fn parity_of_k_plus_one_separated_variables_is_rejected() {
    // One parity variable per block; a random 2k^2-block partition would put two of them
    // together about a quarter of the time, and then only k blocks can surface here.
    let k = 3;
    let vars = [1, 5, 9, 14];
    let f = FunctionSpec::linear(16, mask_of(&vars)).unwrap();
    let singles: Vec<Mask> = vars.iter().map(|&v| mask_of(&[v])).collect();
    let p = TesterParams { delta: 0.1, ..TesterParams::new(k, 0.2) };
    let r = rate(TRIALS, 304, |rng| {
        let part = forced_partition(16, &singles, 2 * k * k - singles.len(), rng);
        let mut o = TargetOracle::uniform(f.clone());
        approx_target_on(&mut o, &p, ApproxVariant::Basic, part, rng).is_err()
    });
    assert!(r >= HIGH, "reject rate {r}");
}

#[test]
fn forced_partition_on_a_junta_gives_valid_small_records() {
    let k = 3;
    let vars = [2, 7, 11];
    let f = table_tree(14, &[1, 6, 10], &[false, true, true, false, true, false, true, true]);
    let singles: Vec<Mask> = vars.iter().map(|&v| mask_of(&[v])).collect();
    for variant in [ApproxVariant::Basic, ApproxVariant::Improved] {
        let r = rate(100, 305, |rng| {
            let part = forced_partition(14, &singles, 2 * k * k - 3, rng);
            let mut o = TargetOracle::uniform(f.clone());
            let rec = approx_target_on(&mut o, &TesterParams::new(k, 0.2), variant, part, rng).unwrap();
            assert!(rec.q() <= k);
            rec.witnesses_hold(&|x| f.evaluate(x))
        });
        assert_eq!(r, 1.0, "{variant:?}");
    }
}

/// `Pr_U[f(x_X o 0) != f(x)]`, exhaustively.
fn zeroing_error(f: &FunctionSpec, mask: Mask) -> f64 {
    let n = f.n();
    let bad = (0..1u64 << n).filter(|&x| f.eval_bits(x) != f.eval_bits(x & mask)).count();
    bad as f64 / (1u64 << n) as f64
}

#[test]
fn returned_records_hold_and_are_close() {
    // Random sparse functions of three to five variables; the wider ones are often not 3-juntas.
    let (k, eps) = (3, 0.2);
    let params = TesterParams::new(k, eps);
    let mut returned = 0;
    let mut close = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(306);
    for _ in 0..300 {
        let n = 10;
        let j = rng.gen_range(3..=5);
        let vars = sample(&mut rng, n, j).into_vec();
        let values: Vec<bool> = (0..1usize << j).map(|_| rng.gen_bool(0.2)).collect();
        let f = table_tree(n, &vars, &values);
        let mut o = TargetOracle::uniform(f.clone());
        if let Ok(rec) = approx_target(&mut o, &params, ApproxVariant::Basic, &mut rng) {
            returned += 1;
            assert!(rec.witnesses_hold(&|x| f.evaluate(x)));
            assert!(rec.q() <= k);
            close += (zeroing_error(&f, rec.mask) <= eps / params.c) as usize;
        }
    }
    assert!(returned >= 60, "only {returned} records returned");
    assert!(close as f64 / returned as f64 >= 14.0 / 15.0, "{close}/{returned} close");
}

fn single_block_record(f: &FunctionSpec, block: Mask, r: usize, rng: &mut ChaCha8Rng) -> RelevantSetRecord {
    brute_record(f, forced_partition(f.n(), &[block], r - 1, rng), 1)
}

#[test]
fn literal_slices_pass_test_sets() {
    let f = FunctionSpec::dnf_from_literals(12, &[vec![2, -5], vec![8]]).unwrap();
    let r = rate(TRIALS, 307, |rng| {
        let part = forced_partition(12, &[mask_of(&[2, 3]), mask_of(&[5]), mask_of(&[8, 12])], 4, rng);
        let rec = brute_record(&f, part, 3);
        let mut o = TargetOracle::uniform(f.clone());
        test_sets(&mut o, &rec, 1.0 / 30.0, 1.0 / 15.0, rng).is_ok()
    });
    assert_eq!(r, 1.0);
}

#[test]
fn a_two_variable_slice_fails_test_sets() {
    let f = FunctionSpec::linear(12, mask_of(&[3, 4])).unwrap();
    let r = rate(TRIALS, 308, |rng| {
        let rec = single_block_record(&f, mask_of(&[3, 4, 10]), 6, rng);
        let mut o = TargetOracle::uniform(f.clone());
        test_sets(&mut o, &rec, 1.0 / 30.0, 0.1, rng).is_err()
    });
    assert!(r >= HIGH, "reject rate {r}");
}

#[test]
fn a_constant_slice_fails_test_sets() {
    let f = FunctionSpec::constant(8, false);
    let mut rng = ChaCha8Rng::seed_from_u64(309);
    let part = forced_partition(8, &[0b11], 3, &mut rng);
    let mut rec = RelevantSetRecord::empty(part);
    rec.mask = 0b11;
    rec.blocks = vec![0];
    rec.witnesses = vec![Point::new(8, 0b1)];
    rec.witness_signs = vec![true];
    let mut o = TargetOracle::uniform(f);
    assert!(test_sets(&mut o, &rec, 1.0 / 30.0, 0.1, &mut rng).is_err());
}

#[test]
fn value_recovery_reads_the_hidden_literals() {
    let vars = [3, 6, 13];
    let f = table_tree(16, &[2, 5, 12], &[true, false, false, true, false, true, true, true]);
    let mut rng = ChaCha8Rng::seed_from_u64(310);
    for _ in 0..100 {
        let part = forced_partition(
            16,
            &[mask_of(&[3, 1]), mask_of(&[6, 7, 8]), mask_of(&[13])],
            5,
            &mut rng,
        );
        let rec = brute_record(&f, part, 3);
        let w = Point::new(16, rng.gen());
        let mut o = TargetOracle::uniform(f.clone());
        let z = rel_var_values(&mut o, w, &rec, 0.1, None, &mut rng).unwrap();
        let want: Vec<bool> = vars.iter().map(|&v| w.get(v - 1)).collect();
        assert_eq!(z, want);
        let z0 = rel_var_values(&mut o, Point::zeros(16), &rec, 0.1, None, &mut rng).unwrap();
        assert_eq!(z0, vec![false; 3]);
    }
}

#[test]
fn value_recovery_rejects_a_hidden_parity() {
    let f = FunctionSpec::linear(12, mask_of(&[4, 9])).unwrap();
    let r = rate(TRIALS, 311, |rng| {
        let rec = single_block_record(&f, mask_of(&[4, 9, 11]), 5, rng);
        let mut o = TargetOracle::uniform(f.clone());
        // w splits the two hidden variables so each side of the block holds one of them.
        let w = Point::new(12, mask_of(&[4]));
        rel_var_values(&mut o, w, &rec, 0.1, None, rng).is_err()
    });
    assert!(r >= HIGH, "reject rate {r}");
}

#[test]
fn projected_function_matches_ground_truth_everywhere() {
    // For a junta with one relevant variable per block and each u:
    // F(u at the hidden variables) = f(u_X o 0).
    let mut rng = ChaCha8Rng::seed_from_u64(312);
    for _ in 0..20 {
        let n = rng.gen_range(4..=10);
        let q = rng.gen_range(1..=3.min(n));
        let taus = sample(&mut rng, n, q).into_vec();
        let values: Vec<bool> = (0..1usize << q).map(|_| rng.gen()).collect();
        let f = table_tree(n, &taus, &values);
        if naive::relevant(&f).count_ones() as usize != q {
            continue;
        }
        let singles: Vec<Mask> = taus.iter().map(|&t| 1 << t).collect();
        let mut blocks = singles.clone();
        // Widen each block with an irrelevant neighbour when one is free.
        let mut spare: Vec<usize> = (0..n).filter(|i| !taus.contains(i)).collect();
        for b in blocks.iter_mut() {
            if let Some(i) = spare.pop() {
                *b |= 1 << i;
            }
        }
        let part = forced_partition(n, &blocks, 2, &mut rng);
        let rec = brute_record(&f, part, q);
        let mut o = TargetOracle::uniform(f.clone());
        for u in 0..1u64 << n {
            let z: Vec<bool> = taus.iter().map(|&t| u >> t & 1 == 1).collect();
            let before = o.ledger().mq;
            assert_eq!(eval_f(&mut o, &rec, &z), f.eval_bits(u & rec.mask));
            assert_eq!(o.ledger().mq, before + 1);
        }
    }
}

#[test]
fn partitions_cover_only_free_coordinates() {
    let mut rng = ChaCha8Rng::seed_from_u64(313);
    let p = Partition::random_of(10, 0b11_0000_1111, 5, &mut rng);
    assert_eq!(p.coords(), 0b11_0000_1111);
    assert_eq!((0..5).fold(0, |m, b| m | p.block(b)), 0b11_0000_1111 & full_mask(10));
}
