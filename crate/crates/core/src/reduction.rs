//! Front ends that shrink a wide function to a restriction with few relevant variables,
//! then hand the restriction to the composed tester.
//!
//! [`approx_c`] drops variables that only sit in long terms; [`approx_general_c`] drops
//! variables of small influence for classes with a junta-size schedule such as decision
//! lists.

use rand::RngCore;
use serde::Serialize;

use crate::boolfn::{ClassSpec, Mask, Point};
use crate::junta::reps;
use crate::oracle::{uniform_free_point, Oracle, Restricted};
use crate::partition::{binary_search_block, Partition, Restriction};
use crate::pipeline::{
    run_pipeline, ClassConfig, Enumerator, LearnerRoute, PipelineError, PipelineParams, Route, Stage, TesterRun,
};
use crate::junta::Rejection;

/// Constants of the reductions. Defaults: `c = 2`, `c' = 4`, `c1 = 8`, `lambda = 4/3`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ReductionParams {
    /// Term or size bound of the class.
    pub s: usize,
    /// Closeness divisor of the output restriction.
    pub lambda: f64,
    pub c: f64,
    pub c1: f64,
    pub c_prime: f64,
}

impl Default for ReductionParams {
    fn default() -> Self {
        ReductionParams { s: 1, lambda: 4.0 / 3.0, c: 2.0, c1: 8.0, c_prime: 4.0 }
    }
}

impl ReductionParams {
    pub fn new(s: usize) -> Self {
        ReductionParams { s, ..Default::default() }
    }

    /// `m = ceil(c log2(s/epsilon))`.
    pub fn m(&self, epsilon: f64) -> usize {
        reps(self.c * (self.s as f64 / epsilon).log2())
    }

    /// Partition width of [`approx_c`]: `8ms`.
    pub fn r_blocks(&self, epsilon: f64) -> usize {
        8 * self.m(epsilon) * self.s
    }

    /// Block cap of [`approx_c`]: `3ms`.
    pub fn k_cap(&self, epsilon: f64) -> usize {
        3 * self.m(epsilon) * self.s
    }

    /// Term-size cap used by the DNF candidate set after [`approx_c`]: `c log2(s/epsilon)`.
    pub fn term_cap(&self, epsilon: f64) -> usize {
        self.m(epsilon)
    }

    /// Junta-size schedule for length-`len` decision lists: `min(len, c' log2(1/(epsilon delta)))`.
    pub fn dl_k(&self, len: usize, epsilon: f64, delta: f64) -> usize {
        len.min(reps(self.c_prime * (1.0 / (epsilon * delta)).log2())).max(1)
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        if self.s == 0 || self.lambda <= 1.0 || self.c < 1.0 || self.c1 < 1.0 || self.c_prime <= 0.0 {
            return Err(PipelineError::Config(format!("bad reduction parameters {self:?}")));
        }
        Ok(())
    }
}

/// A restriction `x_X o w` together with the blocks that make up `X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApproxOutcome {
    pub restriction: Restriction,
    pub blocks: Vec<usize>,
}

fn on_mask(u: Point, m: Mask, v: Point) -> Point {
    u.splice(m, v)
}

/// Shared discovery loop: draw uniform `u, v`, compare `f(u)` with `f(u_X o v)`, trace a
/// difference to a new block. Rejects past `k` blocks; outputs once `window` draws in a
/// row show no difference.
fn discover(
    o: &mut dyn Oracle,
    part: &Partition,
    k: usize,
    iters: usize,
    window: usize,
    rng: &mut dyn RngCore,
) -> Result<ApproxOutcome, Rejection> {
    let mut x: Mask = 0;
    let mut blocks = Vec::new();
    let mut t = 0usize;
    let finish = |x: Mask, blocks: Vec<usize>, o: &dyn Oracle, rng: &mut dyn RngCore| ApproxOutcome {
        restriction: Restriction { mask: x, background: uniform_free_point(o, rng) },
        blocks,
    };
    for _ in 0..iters {
        let u = uniform_free_point(o, rng);
        let v = uniform_free_point(o, rng);
        t += 1;
        let w = on_mask(u, x, v);
        if w != u {
            let fu = o.mq(u);
            let fw = o.mq(w);
            if fu != fw {
                let res = binary_search_block(&mut |p| o.mq(p), part, x, u, fu, w, fw)
                    .expect("endpoints differ in value and only outside X");
                x |= part.block(res.block);
                blocks.push(res.block);
                if blocks.len() > k {
                    return Err(Rejection::TooManyBlocks(blocks.len()));
                }
                t = 0;
            }
        }
        if t >= window {
            return Ok(finish(x, blocks, o, rng));
        }
    }
    Ok(finish(x, blocks, o, rng))
}

/// Find `X` and a uniform background `w` so that `f(x_X o w)` keeps only variables of short
/// terms and stays `epsilon/lambda`-close to `f`. Rejects when more than `3ms` blocks turn up.
pub fn approx_c(
    o: &mut dyn Oracle,
    red: &ReductionParams,
    epsilon: f64,
    lambda: f64,
    rng: &mut dyn RngCore,
) -> Result<ApproxOutcome, Rejection> {
    let k = red.k_cap(epsilon);
    let part = Partition::random_of(o.n(), o.free(), red.r_blocks(epsilon), rng);
    let l = (100.0 * k as f64).ln();
    let iters = reps(100.0 * lambda * k as f64 * l / epsilon);
    let window = reps(100.0 * lambda * l / epsilon);
    discover(o, &part, k, iters, window, rng)
}

/// Find `X` and a uniform background `w` for a class whose members are close to
/// `k`-juntas in the sense of the general reduction. Partition width `k^(c+1)`.
pub fn approx_general_c(
    o: &mut dyn Oracle,
    red: &ReductionParams,
    k: usize,
    epsilon: f64,
    delta: f64,
    rng: &mut dyn RngCore,
) -> Result<ApproxOutcome, Rejection> {
    let kf = k.max(1) as f64;
    let r = kf.powf(red.c + 1.0).ceil().max(1.0) as usize;
    let part = Partition::random_of(o.n(), o.free(), r, rng);
    let l = (4.0 * kf / delta).ln();
    let iters = reps(4.0 * red.c1 * kf / (delta * epsilon) * l);
    let window = reps(4.0 * red.c1 / (delta * epsilon) * l);
    discover(o, &part, k, iters, window, rng)
}

fn rejected_at(o: &dyn Oracle, stage: Stage, r: Rejection) -> TesterRun {
    TesterRun { accepted: false, stage, rejection: Some(r), q: None, ledger: o.ledger() }
}

/// Test `s`-term DNF (or sparse polynomials, monotone or unate DNF through their learners)
/// under the uniform law: shrink with [`approx_c`] at closeness `epsilon/6`, then run the
/// composed tester on the restriction with candidates of term size at most `c log2(s/epsilon)`.
pub fn tester_approx_c(
    o: &mut dyn Oracle,
    cls: ClassSpec,
    params: &PipelineParams,
    red: &ReductionParams,
    rng: &mut dyn RngCore,
) -> Result<TesterRun, PipelineError> {
    red.validate()?;
    let eps = params.epsilon;
    let delta = params.stage_delta;
    let k = red.k_cap(eps);
    let cap = red.term_cap(eps);
    let (class, route) = match cls {
        ClassSpec::Dnf { s, .. } => (ClassSpec::Dnf { s, term_cap: Some(cap) }, Route::Enumerate(Enumerator::Dnf { s, term_cap: cap })),
        ClassSpec::SparsePoly { s, .. } => (ClassSpec::SparsePoly { s, d: 64 }, Route::Learn(LearnerRoute::PolyUnif { s })),
        ClassSpec::MonotoneDnf { s, .. } | ClassSpec::UnateDnf { s, .. } => {
            let unate = matches!(cls, ClassSpec::UnateDnf { .. });
            let r = reps(2.0 * ((12.0 * s as f64 / eps).log2() + (3.0 / delta).log2()));
            let class = if unate { ClassSpec::UnateDnf { s, r } } else { ClassSpec::MonotoneDnf { s, r } };
            (class, Route::Learn(LearnerRoute::Monotone { s, r, unate }))
        }
        other => {
            return Err(PipelineError::Config(format!("{} has no term-size reduction", other.name())));
        }
    };
    let cfg = ClassConfig { class, k, route, witness_hints: matches!(cls, ClassSpec::UnateDnf { .. }) };
    let out = match approx_c(o, red, eps, 6.0, rng) {
        Ok(out) => out,
        Err(r) => return Ok(rejected_at(o, Stage::ApproxC, r)),
    };
    let pp = PipelineParams { approx_c: 6.0, ..*params };
    let mut h = Restricted::new(o, out.restriction.mask, out.restriction.background);
    run_pipeline(&mut h, &cfg, &pp, rng)
}

/// Test length-`len` `r`-decision lists (`r = 1` for plain lists) under the uniform law:
/// shrink with [`approx_general_c`], then run the composed tester with the list learner.
pub fn tester_r_decision_list(
    o: &mut dyn Oracle,
    r: usize,
    len: usize,
    params: &PipelineParams,
    red: &ReductionParams,
    rng: &mut dyn RngCore,
) -> Result<TesterRun, PipelineError> {
    red.validate()?;
    let eps = params.epsilon;
    let delta = params.stage_delta;
    let k_len = red.dl_k(len, eps, delta);
    let k = r.max(1) * k_len;
    let out = match approx_general_c(o, red, k, eps, delta, rng) {
        Ok(out) => out,
        Err(rej) => return Ok(rejected_at(o, Stage::ApproxC, rej)),
    };
    let junta = (red.lambda * k as f64).ceil() as usize;
    let list_len = len.min(junta);
    let class = if r <= 1 { ClassSpec::DecisionList { len: list_len } } else { ClassSpec::RDecisionList { r, len: list_len } };
    let cfg = ClassConfig { class, k: junta, route: Route::Learn(LearnerRoute::DecisionList { r: r.max(1), len: list_len }), witness_hints: false };
    let mut h = Restricted::new(o, out.restriction.mask, out.restriction.background);
    run_pipeline(&mut h, &cfg, params, rng)
}

/// [`tester_r_decision_list`] with `r = 1`.
pub fn tester_decision_list(
    o: &mut dyn Oracle,
    len: usize,
    params: &PipelineParams,
    red: &ReductionParams,
    rng: &mut dyn RngCore,
) -> Result<TesterRun, PipelineError> {
    tester_r_decision_list(o, 1, len, params, red, rng)
}
