//! Random partitions of the variables and the binary search that traces a value change
//! between two points to a single block in about log2(r) queries.
//!
//! `cargo run --example block_search`

use bftest::boolfn::{FunctionSpec, Point};
use bftest::partition::{binary_search_block, Partition};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let n = 32;
    // f depends on x7 and x20 only.
    let f = FunctionSpec::dnf_from_literals(n, &[vec![7, 20]]).unwrap();
    let part = Partition::random_of(n, u64::MAX >> (64 - n), 16, &mut rng);
    println!("x7 in block {:?}, x20 in block {:?}", part.block_of(6), part.block_of(19));

    let u = Point::zeros(n);
    let w = Point::ones(n);
    let (fu, fw) = (f.evaluate(u), f.evaluate(w));
    let res = binary_search_block(&mut |p| f.evaluate(p), &part, 0, u, fu, w, fw).unwrap();
    println!(
        "found block {} = {:032b} after {} queries; f(a) = {}, f(b) = {}",
        res.block,
        part.block(res.block),
        res.queries,
        res.fa,
        res.fb
    );
}
