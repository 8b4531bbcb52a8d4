//! Relevant-block discovery and the procedures built on it.
//!
//! A run partitions the free coordinates into blocks, finds blocks that carry relevant
//! variables together with witnesses, checks that each block behaves like a single literal,
//! and reads off the value of that hidden literal at any point.

use std::collections::BTreeMap;

use rand::RngCore;
use serde::Serialize;

use crate::boolfn::{Mask, Point};
use crate::oracle::{uniform_free_point, Oracle, Restricted};
use crate::partition::{binary_search_block, Partition};

/// Parameters shared by the block procedures.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TesterParams {
    pub k: usize,
    pub epsilon: f64,
    pub delta: f64,
    /// Target closeness is `epsilon / c`.
    pub c: f64,
    /// Literal-closeness radius for the generalized slice test and value recovery.
    pub beta: f64,
}

impl TesterParams {
    pub fn new(k: usize, epsilon: f64) -> Self {
        TesterParams { k, epsilon, delta: 1.0 / 15.0, c: 3.0, beta: 1.0 / 30.0 }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.k < 1 {
            return Err("k must be at least 1".into());
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(format!("epsilon {} outside (0,1)", self.epsilon));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(format!("delta {} outside (0,1)", self.delta));
        }
        if !(self.beta > 0.0 && self.beta <= 1.0 / 30.0 + 1e-12) {
            return Err(format!("beta {} outside (0, 1/30]", self.beta));
        }
        if !(self.c > 0.0) {
            return Err("c must be positive".into());
        }
        Ok(())
    }
}

/// A repeat count from a real-valued formula: rounded up, at least 1.
pub fn reps(x: f64) -> usize {
    if x.is_finite() && x > 1.0 {
        x.ceil() as usize
    } else {
        1
    }
}

/// Relevant blocks found so far with one witness per block.
///
/// For every `i`, `witnesses[i]` is zero outside `mask` and
/// `f(witnesses[i]) = witness_signs[i] != f(witnesses[i] with blocks[i] zeroed)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelevantSetRecord {
    pub mask: Mask,
    pub blocks: Vec<usize>,
    pub witnesses: Vec<Point>,
    pub witness_signs: Vec<bool>,
    pub partition: Partition,
}

impl RelevantSetRecord {
    pub fn empty(partition: Partition) -> Self {
        RelevantSetRecord { mask: 0, blocks: vec![], witnesses: vec![], witness_signs: vec![], partition }
    }

    /// Number of blocks, the arity of the projected function.
    pub fn q(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_mask(&self, i: usize) -> Mask {
        self.partition.block(self.blocks[i])
    }

    /// Check the witness invariant with an uncounted evaluator.
    pub fn witnesses_hold(&self, f: &dyn Fn(Point) -> bool) -> bool {
        self.blocks.len() == self.witnesses.len()
            && self.witnesses.iter().enumerate().all(|(i, &v)| {
                v.bits() & !self.mask == 0 && f(v) == self.witness_signs[i] && f(v) != f(v.clear_mask(self.block_mask(i)))
            })
    }
}

/// Why a procedure gave up.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Rejection {
    /// More relevant blocks than allowed surfaced.
    TooManyBlocks(usize),
    /// A slice is not a single literal.
    SliceNotLiteral(usize),
    /// A slice looked constant under the complement check.
    SliceConstant(usize),
    /// Value recovery saw both halves of a block matter.
    TwoVariablesInBlock(usize),
    /// A direct disagreement was sampled.
    Disagreement,
    /// No candidate in the class survived.
    NoSurvivor,
    /// A learner failed, overran its budget or emitted something outside the class.
    Learner(String),
}

/// One relevant block with a pair of points differing only inside it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockEvidence {
    pub block: Mask,
    pub a: Point,
    pub b: Point,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum JuntaVerdict {
    Accept,
    Reject(Vec<BlockEvidence>),
}

/// One-sided uniform junta test over the free coordinates of `o`.
///
/// Each round partitions into `4(k+1)^2` blocks, keeps a union `J` of blocks already
/// shown relevant and draws `x, y` uniformly, comparing `f(x)` with `f(x_J o y)`. A
/// difference is traced to a new block by binary search. Finding `k+1` blocks proves
/// more than `k` relevant variables, so members are never rejected.
pub fn uniform_junta(o: &mut dyn Oracle, k: usize, epsilon: f64, delta: f64, rng: &mut dyn RngCore) -> JuntaVerdict {
    let rounds = reps((1.0 / delta).ln() / 4f64.ln());
    let r = 4 * (k + 1) * (k + 1);
    let iters = reps(16.0 * (k as f64 + 1.0) / epsilon);
    let free = o.free();
    for _ in 0..rounds {
        let part = Partition::random_of(o.n(), free, r, rng);
        let mut found: Vec<BlockEvidence> = Vec::new();
        let mut j: Mask = 0;
        for _ in 0..iters {
            let x = uniform_free_point(o, rng);
            let y = uniform_free_point(o, rng);
            let z = x.splice(j, y);
            if z == x {
                continue;
            }
            let fx = o.mq(x);
            let fz = o.mq(z);
            if fx == fz {
                continue;
            }
            let res = binary_search_block(&mut |p| o.mq(p), &part, j, x, fx, z, fz)
                .expect("endpoints differ in value and only outside J");
            let block = part.block(res.block);
            j |= block;
            found.push(BlockEvidence { block, a: res.a, b: res.b });
            if found.len() > k {
                return JuntaVerdict::Reject(found);
            }
        }
    }
    JuntaVerdict::Accept
}

/// Variant switches for [`approx_target`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ApproxVariant {
    /// Stop once `c ln(15k)/epsilon` consecutive draws show no difference.
    Basic,
    /// Run `16ck/epsilon` draws, then pick the best intermediate set by estimation.
    Improved,
}

struct Witness {
    w: Point,
    fw: bool,
    block: usize,
}

/// Shared state of the discovery loop.
struct Discovery {
    part: Partition,
    k: usize,
    mask: Mask,
    order: Vec<usize>,
    witness: BTreeMap<usize, (Point, bool)>,
}

impl Discovery {
    fn record(&self) -> RelevantSetRecord {
        let mut rec = RelevantSetRecord::empty(self.part.clone());
        rec.mask = self.mask;
        for &b in &self.order {
            let (v, s) = self.witness[&b];
            rec.blocks.push(b);
            rec.witnesses.push(v);
            rec.witness_signs.push(s);
        }
        rec
    }

    /// Handle a draw with `f(u) != f(u_X o 0)`: find new blocks until every
    /// pending witness certifies its block for the enlarged `X`.
    /// Returns `Err` with the block count once it exceeds `k`.
    fn discover(&mut self, o: &mut dyn Oracle, u: Point, fu: bool, fux: bool) -> Result<(), usize> {
        let mut stack: Vec<Witness> = Vec::new();
        let (mut a, mut fa, mut b, mut fb) = (u, fu, u.and(Point::new(u.n(), self.mask)), fux);
        loop {
            let res = binary_search_block(&mut |p| o.mq(p), &self.part, self.mask, a, fa, b, fb)
                .expect("search endpoints differ in value and only outside X");
            // `res.b` is `res.a` with the new block zeroed, so `res.a` is a witness for it.
            self.mask |= self.part.block(res.block);
            self.order.push(res.block);
            if self.order.len() > self.k {
                return Err(self.order.len());
            }
            stack.push(Witness { w: res.a, fw: res.fa, block: res.block });
            loop {
                let Some(top) = stack.last() else { return Ok(()) };
                let xr = self.part.block(top.block);
                let wx = top.w.and(Point::new(u.n(), self.mask));
                let wx_minus = wx.clear_mask(xr);
                let q1 = o.mq(wx);
                let q2 = o.mq(wx_minus);
                if q1 != q2 {
                    self.witness.insert(top.block, (wx, q1));
                    stack.pop();
                    continue;
                }
                if q1 != top.fw {
                    (a, fa, b, fb) = (top.w, top.fw, wx, q1);
                } else {
                    (a, fa, b, fb) = (top.w.clear_mask(xr), !top.fw, wx_minus, q2);
                }
                break;
            }
        }
    }
}

/// Find relevant blocks `X` with witnesses so that `f(x_X o 0)` is close to `f` under the
/// oracle's distribution. Rejects when more than `k` blocks turn up.
pub fn approx_target(
    o: &mut dyn Oracle,
    params: &TesterParams,
    variant: ApproxVariant,
    rng: &mut dyn RngCore,
) -> Result<RelevantSetRecord, Rejection> {
    let k = params.k;
    let r = 2 * k * k;
    let part = Partition::random_of(o.n(), o.free(), r.max(1), rng);
    approx_target_on(o, params, variant, part, rng)
}

/// [`approx_target`] with a caller-chosen partition.
pub fn approx_target_on(
    o: &mut dyn Oracle,
    params: &TesterParams,
    variant: ApproxVariant,
    part: Partition,
    rng: &mut dyn RngCore,
) -> Result<RelevantSetRecord, Rejection> {
    let kf = params.k as f64;
    let c = params.c;
    let free = o.free();
    let mut d = Discovery { part, k: params.k, mask: 0, order: vec![], witness: BTreeMap::new() };
    match variant {
        ApproxVariant::Basic => {
            let m = reps(c * kf * (15.0 * kf).ln() / params.epsilon);
            let window = reps(c * (15.0 * kf).ln() / params.epsilon);
            let mut t = 0usize;
            for _ in 0..m {
                let u = o.exq(rng).and(Point::new(o.n(), free));
                t += 1;
                let ux = u.and(Point::new(u.n(), d.mask));
                let fu = o.mq(u);
                let fux = o.mq(ux);
                if fu != fux {
                    d.discover(o, u, fu, fux).map_err(Rejection::TooManyBlocks)?;
                    t = 0;
                }
                if t >= window {
                    return Ok(d.record());
                }
            }
            Ok(d.record())
        }
        ApproxVariant::Improved => {
            let m = reps(16.0 * c * kf / params.epsilon);
            let mut snapshots = vec![d.record()];
            for _ in 0..m {
                let u = o.exq(rng).and(Point::new(o.n(), free));
                let ux = u.and(Point::new(u.n(), d.mask));
                let fu = o.mq(u);
                let fux = o.mq(ux);
                if fu != fux {
                    d.discover(o, u, fu, fux).map_err(Rejection::TooManyBlocks)?;
                    snapshots.push(d.record());
                }
            }
            if snapshots.len() == 1 {
                return Ok(snapshots.pop().unwrap());
            }
            let samples = reps(96.0 * c / params.epsilon * (60.0 * kf).ln());
            let mut errors = vec![0usize; snapshots.len()];
            for _ in 0..samples {
                let x = o.exq(rng).and(Point::new(o.n(), free));
                let fx = o.mq(x);
                for (i, s) in snapshots.iter().enumerate() {
                    if o.mq(x.and(Point::new(x.n(), s.mask))) != fx {
                        errors[i] += 1;
                    }
                }
            }
            // Smallest estimate wins; ties go to the larger set.
            let best = (0..snapshots.len())
                .rev()
                .min_by_key(|&i| errors[i])
                .unwrap();
            Ok(snapshots.swap_remove(best))
        }
    }
}

/// Check that every slice `f(x_{X_l} o v^(l))` is close to a literal under the uniform law.
/// `beta` is the closeness radius; `1/30` gives the basic procedure.
pub fn test_sets(
    o: &mut dyn Oracle,
    rec: &RelevantSetRecord,
    beta: f64,
    delta: f64,
    rng: &mut dyn RngCore,
) -> Result<(), Rejection> {
    for i in 0..rec.q() {
        let xl = rec.block_mask(i);
        let v = rec.witnesses[i];
        {
            let mut slice = Restricted::new(o, xl, v);
            if let JuntaVerdict::Reject(_) = uniform_junta(&mut slice, 1, beta, delta, rng) {
                return Err(Rejection::SliceNotLiteral(rec.blocks[i]));
            }
        }
        let b = Point::new(o.n(), rng.next_u64() & xl);
        let p = b.splice(xl, v);
        let pbar = b.flip_mask(xl).splice(xl, v);
        if o.mq(p) == o.mq(pbar) {
            return Err(Rejection::SliceConstant(rec.blocks[i]));
        }
    }
    Ok(())
}

/// Repetitions per block for value recovery. `beta = None` gives the basic count.
pub fn rel_var_reps(q: usize, delta: f64, beta: Option<f64>) -> usize {
    let q = q.max(1) as f64;
    match beta {
        None => reps((q / delta).ln() / (4.0f64 / 3.0).ln()),
        Some(b) => reps((q / delta).ln() / (1.0 / (3.0 * b.sqrt())).ln()),
    }
}

/// Recover `w` at the hidden literal of each block.
///
/// Per block, `Y_0` and `Y_1` split the block by `w`'s bits. Each repetition picks `b`
/// uniformly and checks whether flipping `Y_0` or `Y_1` inside `b_{X_l} o v^(l)` changes
/// the value; exactly one side must matter, the same side every time.
pub fn rel_var_values(
    o: &mut dyn Oracle,
    w: Point,
    rec: &RelevantSetRecord,
    delta: f64,
    beta: Option<f64>,
    rng: &mut dyn RngCore,
) -> Result<Vec<bool>, Rejection> {
    let h = rel_var_reps(rec.q(), delta, beta);
    let mut z = Vec::with_capacity(rec.q());
    for i in 0..rec.q() {
        let xl = rec.block_mask(i);
        let v = rec.witnesses[i];
        let y1 = xl & w.bits();
        let y0 = xl & !w.bits();
        let mut side: Option<bool> = None;
        for _ in 0..h {
            let base = Point::new(o.n(), rng.next_u64() & xl).splice(xl, v);
            let fb = o.mq(base);
            let g0 = o.mq(base.flip_mask(y0)) != fb;
            if g0 && side == Some(true) {
                return Err(Rejection::TwoVariablesInBlock(rec.blocks[i]));
            }
            let g1 = o.mq(base.flip_mask(y1)) != fb;
            if g0 == g1 || side == Some(!g1) {
                return Err(Rejection::TwoVariablesInBlock(rec.blocks[i]));
            }
            side = Some(g1);
        }
        z.push(side.expect("at least one repetition"));
    }
    Ok(z)
}

/// The point that sets every coordinate of block `l` to `z_l` and everything else to 0.
pub fn f_point(rec: &RelevantSetRecord, n: usize, z: &[bool]) -> Point {
    assert_eq!(z.len(), rec.q(), "one value per block");
    let bits = z
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .fold(0u64, |acc, (i, _)| acc | rec.block_mask(i));
    Point::new(n, bits)
}

/// `F(z)` with exactly one membership query.
pub fn eval_f(o: &mut dyn Oracle, rec: &RelevantSetRecord, z: &[bool]) -> bool {
    let p = f_point(rec, o.n(), z);
    o.mq(p)
}
