//! Random partitions and the block binary search.

use bftest::boolfn::{full_mask, FunctionSpec, Mask, Point};
use bftest::harness::table_tree;
use bftest::partition::{binary_search_block, Partition};
use proptest::prelude::*;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn block_sizes_concentrate() {
    // n = 64, r = 8: each size is Binomial(64, 1/8), mean 8, sd about 2.65.
    let (n, r) = (64, 8);
    let sd = (n as f64 * (1.0 / r as f64) * (1.0 - 1.0 / r as f64)).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(201);
    let (mut inside, mut total, mut sum) = (0, 0, 0usize);
    for _ in 0..500 {
        let p = Partition::random_of(n, full_mask(n), r, &mut rng);
        for b in 0..r {
            let size = p.block(b).count_ones() as usize;
            sum += size;
            total += 1;
            inside += ((size as f64 - 8.0).abs() <= 3.0 * sd) as usize;
        }
    }
    assert_eq!(sum, 500 * n);
    assert!(inside as f64 / total as f64 >= 0.98);
}

#[test]
fn two_parity_search_lands_on_a_relevant_block() {
    // f = x1 ^ x5 on n = 6, four blocks; every pair (u, w) with f(u) != f(w).
    let n = 6;
    let f = FunctionSpec::linear(n, 0b1_0001).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    for _ in 0..20 {
        let part = Partition::random_of(n, full_mask(n), 4, &mut rng);
        for u in 0..64u64 {
            for w in 0..64u64 {
                let (u, w) = (Point::new(n, u), Point::new(n, w));
                let (fu, fw) = (f.evaluate(u), f.evaluate(w));
                if fu == fw {
                    continue;
                }
                let res = binary_search_block(&mut |p| f.evaluate(p), &part, 0, u, fu, w, fw).unwrap();
                assert_ne!(part.block(res.block) & 0b1_0001, 0);
            }
        }
    }
}

fn ceil_log2(x: usize) -> u32 {
    usize::BITS - (x.max(1) - 1).leading_zeros()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn search_contract(seed in any::<u64>(), n in 2usize..=24, r in 1usize..=20, j in 1usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let vars = sample(&mut rng, n, j.min(n)).into_vec();
        let values: Vec<bool> = (0..1usize << vars.len()).map(|_| rng.gen()).collect();
        let f = table_tree(n, &vars, &values);
        let part = Partition::random_of(n, full_mask(n), r, &mut rng);
        let excluded: Mask = (0..r).filter(|_| rng.gen_bool(0.3)).fold(0, |m, b| m | part.block(b));
        let found = (0..200).find_map(|_| {
            let u = Point::new(n, rng.gen());
            let w = u.splice(excluded, Point::new(n, rng.gen()));
            (f.evaluate(u) != f.evaluate(w)).then_some((u, w))
        });
        let Some((u, w)) = found else { return Ok(()) };
        let (fu, fw) = (f.evaluate(u), f.evaluate(w));
        let agree = !(u.bits() ^ w.bits()) & full_mask(n);
        let mut seen = Vec::new();
        let res = binary_search_block(&mut |p| { seen.push(p); f.evaluate(p) }, &part, excluded, u, fu, w, fw).unwrap();
        let block = part.block(res.block);
        prop_assert_eq!(block & excluded, 0);
        prop_assert_ne!(block & (u.bits() ^ w.bits()), 0);
        prop_assert_eq!((res.a.bits() ^ res.b.bits()) & !block, 0);
        prop_assert_eq!(res.fa, f.evaluate(res.a));
        prop_assert_eq!(res.fb, f.evaluate(res.b));
        prop_assert_ne!(res.fa, res.fb);
        let cands = part.blocks_meeting(u.bits() ^ w.bits()).len();
        prop_assert!(res.queries <= ceil_log2(cands));
        prop_assert_eq!(seen.len() as u32, res.queries);
        for p in seen {
            prop_assert_eq!((p.bits() ^ u.bits()) & agree, 0);
        }
    }
}
