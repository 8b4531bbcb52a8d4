#![allow(dead_code)]

pub mod naive;

use bftest::boolfn::{FunctionSpec, Mask, Point};
use bftest::junta::RelevantSetRecord;
use bftest::partition::Partition;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Fraction of `trials` seeded runs for which `run` returns true.
pub fn rate(trials: usize, seed: u64, mut run: impl FnMut(&mut ChaCha8Rng) -> bool) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials).filter(|_| run(&mut rng)).count() as f64 / trials as f64
}

/// Partition of `n` variables whose first blocks are `relevant` (in order) and whose
/// remaining variables are spread over `extra` more blocks.
pub fn forced_partition(n: usize, relevant: &[Mask], extra: usize, rng: &mut dyn RngCore) -> Partition {
    let r = relevant.len() + extra.max(1);
    let mut blocks = vec![0; r];
    blocks[..relevant.len()].copy_from_slice(relevant);
    let used = relevant.iter().fold(0, |m, b| m | b);
    for i in (0..n).filter(|i| used >> i & 1 == 0) {
        let b = relevant.len() + (rng.next_u64() as usize) % extra.max(1);
        blocks[b] |= 1 << i;
    }
    Partition::from_blocks(n, r, &blocks)
}

/// Record over the first `q` blocks of `part`, with witnesses found by brute force over
/// the points supported on their union. Panics when some block has no witness.
pub fn brute_record(f: &FunctionSpec, part: Partition, q: usize) -> RelevantSetRecord {
    let n = f.n();
    let blocks: Vec<Mask> = (0..q).map(|b| part.block(b)).collect();
    let mask = blocks.iter().fold(0, |m, b| m | b);
    let vars: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
    assert!(vars.len() <= 20, "brute force over the record's mask only");
    let point = |j: u64| Point::new(n, vars.iter().enumerate().fold(0, |m, (b, &v)| m | (j >> b & 1) << v));
    let mut rec = RelevantSetRecord::empty(part);
    rec.mask = mask;
    for (l, &bm) in blocks.iter().enumerate() {
        let v = (0..1u64 << vars.len())
            .map(point)
            .find(|&v| f.evaluate(v) != f.evaluate(v.clear_mask(bm)))
            .unwrap_or_else(|| panic!("block {l} carries no change"));
        rec.blocks.push(l);
        rec.witnesses.push(v);
        rec.witness_signs.push(f.evaluate(v));
    }
    rec
}

pub fn mask_of(vars1: &[usize]) -> Mask {
    vars1.iter().fold(0, |m, &v| m | 1 << (v - 1))
}
