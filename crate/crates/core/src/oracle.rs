//! Query-counted access to a hidden function.
//!
//! Testers and learners only ever see `&mut dyn Oracle`, so the representation behind
//! [`TargetOracle`] stays out of reach and every query lands in its [`QueryLedger`].

use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use crate::boolfn::{full_mask, Distribution, FunctionSpec, Mask, Point};

/// Query counts by oracle kind.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryLedger {
    pub mq: u64,
    pub exq: u64,
    pub wexq: u64,
}

impl QueryLedger {
    pub fn total(&self) -> u64 {
        self.mq + self.exq + self.wexq
    }

    /// Counts accumulated since `earlier`.
    pub fn since(&self, earlier: &QueryLedger) -> QueryLedger {
        QueryLedger {
            mq: self.mq - earlier.mq,
            exq: self.exq - earlier.exq,
            wexq: self.wexq - earlier.wexq,
        }
    }
}

/// Membership and example access to a function on `{0,1}^n`.
pub trait Oracle {
    fn n(&self) -> usize;

    /// Coordinates the function may depend on; the rest are pinned by a wrapper.
    fn free(&self) -> Mask {
        full_mask(self.n())
    }

    /// Membership query.
    fn mq(&mut self, x: Point) -> bool;

    /// Example query: a draw from the run's distribution.
    fn exq(&mut self, rng: &mut dyn RngCore) -> Point;

    /// Weak example query; oracles without an adversary fall back to `exq`.
    fn wexq(&mut self, rng: &mut dyn RngCore) -> Point {
        self.exq(rng)
    }

    fn ledger(&self) -> QueryLedger;
}

/// Supplier of the arbitrary half of weak example draws.
pub trait Adversary: Send {
    fn point(&mut self, n: usize, rng: &mut dyn RngCore) -> Point;
}

/// Uniformly random points, the default adversary.
#[derive(Clone, Copy, Debug, Default)]
pub struct UniformAdversary;

impl Adversary for UniformAdversary {
    fn point(&mut self, n: usize, rng: &mut dyn RngCore) -> Point {
        Point::new(n, rng.next_u64())
    }
}

/// Always the same point.
#[derive(Clone, Copy, Debug)]
pub struct ConstantAdversary(pub Point);

impl Adversary for ConstantAdversary {
    fn point(&mut self, _n: usize, _rng: &mut dyn RngCore) -> Point {
        self.0
    }
}

/// Draws from a fixed distribution.
#[derive(Clone, Debug)]
pub struct DistributionAdversary(pub Distribution);

impl Adversary for DistributionAdversary {
    fn point(&mut self, n: usize, rng: &mut dyn RngCore) -> Point {
        self.0.sample(n, rng)
    }
}

/// The ground-truth oracle for one trial. Queries are never memoized.
pub struct TargetOracle {
    spec: FunctionSpec,
    dist: Distribution,
    ledger: QueryLedger,
    adversary: Box<dyn Adversary>,
}

impl TargetOracle {
    pub fn new(spec: FunctionSpec, dist: Distribution) -> Self {
        TargetOracle { spec, dist, ledger: QueryLedger::default(), adversary: Box::new(UniformAdversary) }
    }

    pub fn uniform(spec: FunctionSpec) -> Self {
        TargetOracle::new(spec, Distribution::Uniform)
    }

    pub fn with_adversary(mut self, adversary: Box<dyn Adversary>) -> Self {
        self.adversary = adversary;
        self
    }

    pub fn distribution(&self) -> &Distribution {
        &self.dist
    }

    /// Uncounted evaluation for post-hoc checks in harness and test code.
    pub fn shadow(&self, x: Point) -> bool {
        self.spec.evaluate(x)
    }

    /// The hidden function, for harness bookkeeping only.
    pub fn ground_truth(&self) -> &FunctionSpec {
        &self.spec
    }

    pub fn reset_ledger(&mut self) {
        self.ledger = QueryLedger::default();
    }
}

impl Oracle for TargetOracle {
    fn n(&self) -> usize {
        self.spec.n()
    }

    fn mq(&mut self, x: Point) -> bool {
        self.ledger.mq += 1;
        self.spec.evaluate(x)
    }

    fn exq(&mut self, rng: &mut dyn RngCore) -> Point {
        self.ledger.exq += 1;
        self.dist.sample(self.spec.n(), rng)
    }

    fn wexq(&mut self, rng: &mut dyn RngCore) -> Point {
        self.ledger.wexq += 1;
        let n = self.spec.n();
        if rng.gen::<bool>() {
            self.dist.sample(n, rng)
        } else {
            self.adversary.point(n, rng)
        }
    }

    fn ledger(&self) -> QueryLedger {
        self.ledger
    }
}

/// The function `x -> f(x_X o w)`: coordinates outside `mask` are pinned to `background`.
pub struct Restricted<'a> {
    inner: &'a mut dyn Oracle,
    mask: Mask,
    background: Point,
}

impl<'a> Restricted<'a> {
    pub fn new(inner: &'a mut dyn Oracle, mask: Mask, background: Point) -> Self {
        let mask = mask & inner.free();
        Restricted { inner, mask, background }
    }
}

impl Oracle for Restricted<'_> {
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn free(&self) -> Mask {
        self.mask
    }

    fn mq(&mut self, x: Point) -> bool {
        self.inner.mq(x.splice(self.mask, self.background))
    }

    fn exq(&mut self, rng: &mut dyn RngCore) -> Point {
        self.inner.exq(rng).splice(self.mask, self.background)
    }

    fn wexq(&mut self, rng: &mut dyn RngCore) -> Point {
        self.inner.wexq(rng).splice(self.mask, self.background)
    }

    fn ledger(&self) -> QueryLedger {
        self.inner.ledger()
    }
}

/// Routes every example draw through `wexq`, for runs in the weak example model.
pub struct WeakExamples<'a> {
    inner: &'a mut dyn Oracle,
}

impl<'a> WeakExamples<'a> {
    pub fn new(inner: &'a mut dyn Oracle) -> Self {
        WeakExamples { inner }
    }
}

impl Oracle for WeakExamples<'_> {
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn free(&self) -> Mask {
        self.inner.free()
    }

    fn mq(&mut self, x: Point) -> bool {
        self.inner.mq(x)
    }

    fn exq(&mut self, rng: &mut dyn RngCore) -> Point {
        self.inner.wexq(rng)
    }

    fn wexq(&mut self, rng: &mut dyn RngCore) -> Point {
        self.inner.wexq(rng)
    }

    fn ledger(&self) -> QueryLedger {
        self.inner.ledger()
    }
}

/// A uniform point on the free coordinates of `o`, zero elsewhere. Not a query.
pub fn uniform_free_point(o: &dyn Oracle, rng: &mut dyn RngCore) -> Point {
    Point::new(o.n(), rng.next_u64() & o.free())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn repeated_queries_recount() {
        let f = FunctionSpec::linear(2, 0b01).unwrap();
        let mut o = TargetOracle::uniform(f);
        let x: Point = "10".parse().unwrap();
        assert!(o.mq(x));
        assert!(o.mq(x));
        assert_eq!(o.ledger().mq, 2);
    }

    #[test]
    fn weak_draws_mix_half_and_half() {
        let f = FunctionSpec::constant(4, false);
        let ones: Point = "1111".parse().unwrap();
        let dist = Distribution::explicit(vec![(ones, 1.0)]).unwrap();
        let mut o = TargetOracle::new(f, dist).with_adversary(Box::new(ConstantAdversary(Point::zeros(4))));
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let hits = (0..10_000).filter(|_| o.wexq(&mut rng) == ones).count();
        assert!((hits as f64 / 1e4 - 0.5).abs() < 0.02);
        assert_eq!(o.ledger().mq, 0);
        assert_eq!(o.ledger().wexq, 10_000);
    }

    #[test]
    fn restriction_pins_background() {
        let f = FunctionSpec::linear(3, 0b111).unwrap();
        let mut o = TargetOracle::uniform(f);
        let bg: Point = "001".parse().unwrap();
        let mut r = Restricted::new(&mut o, 0b011, bg);
        assert!(r.mq("000".parse().unwrap()));
        assert!(!r.mq("100".parse().unwrap()));
        assert_eq!(r.ledger().mq, 2);
    }
}
