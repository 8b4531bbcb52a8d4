//! The composed class tester: find relevant blocks, check each block is a literal, check
//! `f` is close to the projected function `F`, then check `F` against the class by
//! candidate elimination or by running a learner on `F`.

use std::collections::HashSet;

use rand::RngCore;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::boolfn::{ClassSpec, FunctionSpec, Point, Term};
use crate::junta::{
    approx_target, eval_f, f_point, rel_var_values, reps, test_sets, ApproxVariant, RelevantSetRecord, Rejection,
    TesterParams,
};
use crate::learners::{
    decision_list_sample_size, learn_decision_list, learn_monotone, learn_poly_unif, learn_polynomial, monotone_draws,
    poly_unif_draws, polynomial_draws, LearnerParams,
};
use crate::oracle::{uniform_free_point, Oracle, QueryLedger, WeakExamples};

/// Largest `q` for which candidate tables are built.
pub const MAX_ENUM_Q: usize = 16;
/// Largest candidate set an enumerator may stream.
pub const MAX_CANDIDATES: f64 = 1e7;
/// Largest nominal DNF candidate set; the streamed set is pruned and checked against
/// [`MAX_CANDIDATES`] after sampling.
pub const MAX_PRUNED_BOUND: f64 = 1e15;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Model {
    #[serde(rename = "uniform")]
    Uniform,
    #[serde(rename = "dfree")]
    DistributionFree,
    #[serde(rename = "weak")]
    Weak,
}

impl std::str::FromStr for Model {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "uniform" => Ok(Model::Uniform),
            "dfree" => Ok(Model::DistributionFree),
            "weak" => Ok(Model::Weak),
            _ => Err(format!("unknown model {s:?}; expected uniform, dfree or weak")),
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Serialize)]
pub enum PipelineError {
    #[error("configuration: {0}")]
    Config(String),
    #[error("candidate set bound {bound:.3e} exceeds {max:.0e} at q = {q}")]
    EnumerationOverflow { q: usize, bound: f64, max: f64 },
}

/// Why a stage stopped the run.
#[derive(Clone, Debug, PartialEq)]
pub enum Halt {
    Reject(Rejection),
    Config(PipelineError),
}

impl From<Rejection> for Halt {
    fn from(r: Rejection) -> Self {
        Halt::Reject(r)
    }
}

impl From<PipelineError> for Halt {
    fn from(e: PipelineError) -> Self {
        Halt::Config(e)
    }
}

/// Pipeline stages, in run order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Stage {
    #[serde(rename = "approx_c")]
    ApproxC,
    #[serde(rename = "approx_target")]
    ApproxTarget,
    #[serde(rename = "test_sets")]
    TestSets,
    #[serde(rename = "close_fF")]
    CloseFf,
    #[serde(rename = "close_FC")]
    CloseFc,
    #[serde(rename = "learner")]
    Learner,
    #[serde(rename = "verify")]
    Verify,
}

impl Stage {
    pub fn key(&self) -> &'static str {
        match self {
            Stage::ApproxC => "approx_c",
            Stage::ApproxTarget => "approx_target",
            Stage::TestSets => "test_sets",
            Stage::CloseFf => "close_fF",
            Stage::CloseFc => "close_FC",
            Stage::Learner => "learner",
            Stage::Verify => "verify",
        }
    }
}

/// Candidate generators for `C(Gamma)` over `q` abstract variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Enumerator {
    /// The parity of all `q` variables.
    SingleParity,
    /// DNFs with at most `s` terms of size at most `term_cap` mentioning every variable.
    Dnf { s: usize, term_cap: usize },
    /// Decision trees with at most `size` leaves depending on every variable.
    DecisionTree { size: usize },
}

/// Learners and hint-based constructions run on `F`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LearnerRoute {
    /// The term whose literal signs are the witness signs; no learner queries.
    TermFromSigns,
    /// Monotone learner; with `unate` the variables with negative witness signs are flipped first.
    Monotone { s: usize, r: usize, unate: bool },
    Polynomial { s: usize, d: usize },
    PolyUnif { s: usize },
    DecisionList { r: usize, len: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Route {
    /// Every function of the blocks is in the class (juntas).
    AcceptAll,
    Enumerate(Enumerator),
    Learn(LearnerRoute),
}

/// What the pipeline needs to know about a class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ClassConfig {
    pub class: ClassSpec,
    /// Junta bound.
    pub k: usize,
    pub route: Route,
    /// Polarities of the relevant variables are read from witness signs.
    pub witness_hints: bool,
}

impl ClassConfig {
    /// The standard route for a class.
    pub fn for_class(class: ClassSpec) -> Result<Self, PipelineError> {
        let cfg = |k, route, witness_hints| Ok(ClassConfig { class, k, route, witness_hints });
        match class {
            ClassSpec::Junta { k } => cfg(k, Route::AcceptAll, false),
            ClassSpec::Linear { k } => cfg(k, Route::Enumerate(Enumerator::SingleParity), false),
            ClassSpec::Term { k } => cfg(k, Route::Learn(LearnerRoute::TermFromSigns), true),
            ClassSpec::MonotoneDnf { s, r } => cfg(s * r, Route::Learn(LearnerRoute::Monotone { s, r, unate: false }), false),
            ClassSpec::UnateDnf { s, r } => cfg(s * r, Route::Learn(LearnerRoute::Monotone { s, r, unate: true }), true),
            ClassSpec::SparsePoly { s, d } => cfg(s * d, Route::Learn(LearnerRoute::Polynomial { s, d }), false),
            ClassSpec::DecisionList { len } => cfg(len, Route::Learn(LearnerRoute::DecisionList { r: 1, len }), false),
            ClassSpec::RDecisionList { r, len } => cfg(r * len, Route::Learn(LearnerRoute::DecisionList { r, len }), false),
            ClassSpec::DecisionTree { size } => {
                cfg(size.saturating_sub(1).max(1), Route::Enumerate(Enumerator::DecisionTree { size }), false)
            }
            ClassSpec::Dnf { s, term_cap: Some(c) } => cfg(s * c, Route::Enumerate(Enumerator::Dnf { s, term_cap: c }), false),
            ClassSpec::Dnf { term_cap: None, .. } => Err(PipelineError::Config(
                "a DNF without a term cap has no junta bound; use the reduction tester".into(),
            )),
        }
    }
}

/// Knobs of one pipeline run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PipelineParams {
    pub epsilon: f64,
    /// Failure probability given to each stage.
    pub stage_delta: f64,
    /// Use the improved block search, generalized slice test and improved closeness checks.
    pub improved: bool,
    /// The relevant-set stage aims for closeness `epsilon / approx_c`.
    pub approx_c: f64,
    pub model: Model,
}

impl PipelineParams {
    pub fn new(epsilon: f64, model: Model) -> Self {
        PipelineParams { epsilon, stage_delta: 1.0 / 15.0, improved: false, approx_c: 3.0, model }
    }

    pub fn beta(&self) -> f64 {
        if self.improved {
            self.epsilon.min(1.0 / 30.0)
        } else {
            1.0 / 30.0
        }
    }

    fn rel_beta(&self) -> Option<f64> {
        self.improved.then(|| self.beta())
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        let ok = self.epsilon > 0.0 && self.epsilon < 1.0 && self.stage_delta > 0.0 && self.stage_delta < 1.0;
        if !ok || self.approx_c <= 0.0 {
            return Err(PipelineError::Config(format!("bad pipeline parameters {self:?}")));
        }
        Ok(())
    }
}

/// Outcome of one run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TesterRun {
    pub accepted: bool,
    /// Last stage entered.
    pub stage: Stage,
    pub rejection: Option<Rejection>,
    /// Number of relevant blocks found, when the block search finished.
    pub q: Option<usize>,
    pub ledger: QueryLedger,
}

pub fn z_bits(z: &[bool]) -> u64 {
    z.iter().enumerate().fold(0, |m, (i, &b)| m | (b as u64) << i)
}

pub fn z_bools(bits: u64, q: usize) -> Vec<bool> {
    (0..q).map(|i| bits >> i & 1 == 1).collect()
}

/// Closeness check between `f(x_X o 0)` and `F`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CloseMode {
    /// Independent draws from the run's distribution, basic value recovery.
    Basic,
    /// Same draws, generalized value recovery.
    Improved,
    /// Uniform law only: XOR combinations of a few uniform seeds, values recovered on the seeds.
    UniformPairwise,
}

/// Number of seeds and combinations used by [`CloseMode::UniformPairwise`].
pub fn pairwise_counts(epsilon: f64, delta: f64) -> (usize, usize) {
    let t = reps((12.0 / (epsilon * delta)).log2());
    let m = reps(6.0 / (epsilon * delta));
    (t, m)
}

/// Reject when `f(u_X o 0)` and `F(z(u))` disagree on a sampled point.
pub fn close_ff(
    o: &mut dyn Oracle,
    rec: &RelevantSetRecord,
    epsilon: f64,
    delta: f64,
    beta: f64,
    mode: CloseMode,
    rng: &mut dyn RngCore,
) -> Result<(), Rejection> {
    let n = o.n();
    let free = Point::new(n, o.free());
    let on_x = |u: Point| u.and(Point::new(n, rec.mask));
    match mode {
        CloseMode::Basic | CloseMode::Improved => {
            let t = reps((3.0 / epsilon) * (2.0 / delta).ln());
            let b = (mode == CloseMode::Improved).then_some(beta);
            for _ in 0..t {
                let u = o.exq(rng).and(free);
                let z = rel_var_values(o, u, rec, delta / (2.0 * t as f64), b, rng)?;
                if o.mq(on_x(u)) != eval_f(o, rec, &z) {
                    return Err(Rejection::Disagreement);
                }
            }
        }
        CloseMode::UniformPairwise => {
            let (t, m) = pairwise_counts(epsilon, delta);
            let mut seeds = Vec::with_capacity(t);
            let mut values = Vec::with_capacity(t);
            for _ in 0..t {
                let w = uniform_free_point(o, rng);
                let zeta = rel_var_values(o, w, rec, delta / (2.0 * t as f64), Some(beta), rng)?;
                seeds.push(w);
                values.push(z_bits(&zeta));
            }
            for xi in 1..=m as u64 {
                let (mut u, mut z) = (Point::zeros(n), 0u64);
                for j in 0..t {
                    if xi >> j & 1 == 1 {
                        u = u.xor(seeds[j]);
                        z ^= values[j];
                    }
                }
                if o.mq(on_x(u)) != eval_f(o, rec, &z_bools(z, rec.q())) {
                    return Err(Rejection::Disagreement);
                }
            }
        }
    }
    Ok(())
}

fn words_for(q: usize) -> usize {
    ((1usize << q) / 64).max(1)
}

fn valid_bits(q: usize) -> u64 {
    if q >= 6 {
        u64::MAX
    } else {
        (1u64 << (1 << q)) - 1
    }
}

/// Truth table of `y_v` over `q` variables.
fn var_words(q: usize, v: usize) -> Vec<u64> {
    const PATTERNS: [u64; 6] = [
        0xAAAA_AAAA_AAAA_AAAA,
        0xCCCC_CCCC_CCCC_CCCC,
        0xF0F0_F0F0_F0F0_F0F0,
        0xFF00_FF00_FF00_FF00,
        0xFFFF_0000_FFFF_0000,
        0xFFFF_FFFF_0000_0000,
    ];
    (0..words_for(q))
        .map(|w| {
            let x = if v < 6 {
                PATTERNS[v]
            } else if w >> (v - 6) & 1 == 1 {
                u64::MAX
            } else {
                0
            };
            x & valid_bits(q)
        })
        .collect()
}

fn depends_on(t: &[u64], q: usize, v: usize) -> bool {
    if v < 6 {
        let s = 1 << v;
        let low = !var_words(q.max(6), v)[0];
        t.iter().any(|&w| (w & low) != ((w >> s) & low))
    } else {
        let stride = 1 << (v - 6);
        (0..t.len()).any(|w| w & stride == 0 && t[w] != t[w | stride])
    }
}

fn term_table(q: usize, vars: &[Vec<u64>], t: Term) -> Vec<u64> {
    let mut out = vec![valid_bits(q); words_for(q)];
    for (v, vt) in vars.iter().enumerate() {
        let (p, n) = (t.pos >> v & 1 == 1, t.neg >> v & 1 == 1);
        for (o, &x) in out.iter_mut().zip(vt) {
            if p {
                *o &= x;
            } else if n {
                *o &= !x & valid_bits(q);
            }
        }
    }
    out
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn catalan(n: usize) -> f64 {
    binom(2 * n, n) / (n + 1) as f64
}

/// Labeled points of `F` as (z bits, value).
pub type Labeled = [(u64, bool)];

fn consistent(t: &[u64], sample: &Labeled) -> bool {
    sample.iter().all(|&(z, y)| (t[(z >> 6) as usize] >> (z & 63) & 1 == 1) == y)
}

impl Enumerator {
    /// Upper bound on the number of candidates at `q` variables.
    pub fn bound(&self, q: usize) -> f64 {
        match *self {
            Enumerator::SingleParity => 1.0,
            Enumerator::Dnf { s, term_cap } => {
                let terms: f64 = (0..=term_cap.min(q)).map(|j| binom(q, j) * 2f64.powi(j as i32)).sum();
                (0..=s).map(|i| binom_f(terms, i)).sum()
            }
            Enumerator::DecisionTree { size } => (1..=size.max(1))
                .map(|l| catalan(l - 1) * (q as f64).powi(l as i32 - 1) * 2f64.powi(l as i32))
                .sum(),
        }
    }

    /// Stream candidate truth tables over `q` variables to `visit` until it returns true.
    /// Returns whether some call returned true.
    pub fn any(&self, q: usize, visit: &mut dyn FnMut(&[u64]) -> bool) -> Result<bool, PipelineError> {
        let bound = self.bound(q);
        if q > MAX_ENUM_Q || bound > MAX_CANDIDATES {
            return Err(PipelineError::EnumerationOverflow { q, bound, max: MAX_CANDIDATES });
        }
        let vars: Vec<Vec<u64>> = (0..q).map(|v| var_words(q, v)).collect();
        let all = if q == 64 { u64::MAX } else { (1u64 << q) - 1 };
        match *self {
            Enumerator::SingleParity => {
                let mut t = vec![0u64; words_for(q)];
                for vt in &vars {
                    for (a, b) in t.iter_mut().zip(vt) {
                        *a ^= b;
                    }
                }
                Ok(visit(&t))
            }
            Enumerator::Dnf { s, term_cap } => {
                if q == 0 {
                    return Ok(visit(&[0]) || visit(&[1]));
                }
                let terms = terms_up_to(q, term_cap);
                let tables: Vec<Vec<u64>> = terms.iter().map(|&t| term_table(q, &vars, t)).collect();
                let mut acc = vec![vec![0u64; words_for(q)]];
                Ok(dnf_dfs(&terms, &tables, s, 0, 0, all, &mut acc, visit))
            }
            Enumerator::DecisionTree { size } => {
                let mut by_leaves: Vec<HashSet<Vec<u64>>> = vec![HashSet::new()];
                let zero = vec![0u64; words_for(q)];
                let one = vec![valid_bits(q); words_for(q)];
                by_leaves.push([zero, one].into_iter().collect());
                for l in 2..=size.max(1) {
                    let mut level = HashSet::new();
                    for l1 in 1..l {
                        for a in &by_leaves[l1] {
                            for b in &by_leaves[l - l1] {
                                for vt in &vars {
                                    let t: Vec<u64> = a
                                        .iter()
                                        .zip(b)
                                        .zip(vt)
                                        .map(|((&x, &y), &v)| (x & !v | y & v) & valid_bits(q))
                                        .collect();
                                    level.insert(t);
                                }
                            }
                        }
                    }
                    by_leaves.push(level);
                }
                let mut seen = HashSet::new();
                for level in &by_leaves[1..] {
                    for t in level {
                        if (0..q).all(|v| depends_on(t, q, v)) && seen.insert(t.clone()) && visit(t) {
                            return Ok(true);
                        }
                    }
                }
                Ok(false)
            }
        }
    }
}

impl Enumerator {
    /// Whether some candidate agrees with every labeled point. Same answer as streaming
    /// [`Enumerator::any`] through the sample; DNF candidates are pruned first by dropping
    /// terms that are true on a negative point, since no consistent DNF can contain them.
    pub fn any_consistent(&self, q: usize, sample: &Labeled) -> Result<bool, PipelineError> {
        let Enumerator::Dnf { s, term_cap } = *self else {
            return self.any(q, &mut |t| consistent(t, sample));
        };
        if q > MAX_ENUM_Q {
            return Err(PipelineError::EnumerationOverflow { q, bound: self.bound(q), max: MAX_CANDIDATES });
        }
        if q == 0 {
            return Ok(consistent(&[0], sample) || consistent(&[1], sample));
        }
        let negatives: Vec<u64> = sample.iter().filter(|p| !p.1).map(|p| p.0).collect();
        let positives: Vec<(u64, bool)> = sample.iter().copied().filter(|p| p.1).collect();
        let terms: Vec<Term> = terms_up_to(q, term_cap)
            .into_iter()
            .filter(|t| negatives.iter().all(|&z| !t.eval(z)))
            .collect();
        let work: f64 = (1..=s).map(|i| binom_f(terms.len() as f64, i)).sum();
        if work > MAX_CANDIDATES {
            return Err(PipelineError::EnumerationOverflow { q, bound: work, max: MAX_CANDIDATES });
        }
        let vars: Vec<Vec<u64>> = (0..q).map(|v| var_words(q, v)).collect();
        let tables: Vec<Vec<u64>> = terms.iter().map(|&t| term_table(q, &vars, t)).collect();
        let all = (1u64 << q) - 1;
        let mut acc = vec![vec![0u64; words_for(q)]];
        Ok(dnf_dfs(&terms, &tables, s, 0, 0, all, &mut acc, &mut |t| consistent(t, &positives)))
    }
}

fn binom_f(n: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i as f64).max(0.0) / (i + 1) as f64)
}

/// Terms over `q` variables with at most `cap` literals, the empty term included.
fn terms_up_to(q: usize, cap: usize) -> Vec<Term> {
    let mut out = Vec::new();
    let total = 3usize.pow(q as u32);
    for code in 0..total {
        let (mut c, mut pos, mut neg) = (code, 0u64, 0u64);
        for v in 0..q {
            match c % 3 {
                1 => pos |= 1 << v,
                2 => neg |= 1 << v,
                _ => {}
            }
            c /= 3;
        }
        if ((pos | neg).count_ones() as usize) <= cap {
            out.push(Term { pos, neg });
        }
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn dnf_dfs(
    terms: &[Term],
    tables: &[Vec<u64>],
    left: usize,
    from: usize,
    vars: u64,
    all: u64,
    acc: &mut Vec<Vec<u64>>,
    visit: &mut dyn FnMut(&[u64]) -> bool,
) -> bool {
    if vars == all && acc.len() > 1 && visit(acc.last().unwrap()) {
        return true;
    }
    if left == 0 {
        return false;
    }
    for i in from..terms.len() {
        let next: Vec<u64> = acc.last().unwrap().iter().zip(&tables[i]).map(|(a, b)| a | b).collect();
        acc.push(next);
        let hit = dnf_dfs(terms, tables, left - 1, i + 1, vars | terms[i].vars(), all, acc, visit);
        acc.pop();
        if hit {
            return true;
        }
    }
    false
}

/// Draw a labeled point `(z, F(z))`. Uniform draws cost only the `F` query; otherwise one
/// example draw plus value recovery at failure probability `delta`.
fn labeled_point(
    o: &mut dyn Oracle,
    rec: &RelevantSetRecord,
    model: Model,
    delta: f64,
    beta: Option<f64>,
    rng: &mut dyn RngCore,
) -> Result<(u64, bool), Rejection> {
    let q = rec.q();
    let z = match model {
        Model::Uniform => z_bools(rng.next_u64(), q),
        _ => {
            let u = o.exq(rng).and(Point::new(o.n(), o.free()));
            rel_var_values(o, u, rec, delta, beta, rng)?
        }
    };
    let y = eval_f(o, rec, &z);
    Ok((z_bits(&z), y))
}

/// Sample size of the candidate-elimination stage.
pub fn close_fc_rounds(bound: f64, epsilon: f64, delta: f64, model: Model) -> usize {
    let per = if model == Model::Uniform { 3.0 } else { 12.0 };
    reps(per / epsilon * (2.0 * bound / delta).ln())
}

/// Eliminate candidates that disagree with `F` on sampled points; reject if none survive.
pub fn close_fc(
    o: &mut dyn Oracle,
    rec: &RelevantSetRecord,
    en: Enumerator,
    epsilon: f64,
    delta: f64,
    model: Model,
    beta: Option<f64>,
    rng: &mut dyn RngCore,
) -> Result<(), Halt> {
    let q = rec.q();
    let bound = en.bound(q);
    let limit = if matches!(en, Enumerator::Dnf { .. }) { MAX_PRUNED_BOUND } else { MAX_CANDIDATES };
    if q > MAX_ENUM_Q || bound > limit {
        return Err(PipelineError::EnumerationOverflow { q, bound, max: limit }.into());
    }
    let tau = close_fc_rounds(bound, epsilon, delta, model);
    let mut sample = Vec::with_capacity(tau);
    for _ in 0..tau {
        sample.push(labeled_point(o, rec, model, 0.5, beta, rng)?);
    }
    if en.any_consistent(q, &sample)? {
        Ok(())
    } else {
        Err(Rejection::NoSurvivor.into())
    }
}

/// How many candidates are still alive after each round, for a materialized candidate list.
pub fn survivors_per_round(candidates: &[Vec<u64>], sample: &Labeled) -> Vec<usize> {
    let mut counts = vec![0usize; sample.len() + 1];
    for t in candidates {
        let death = sample
            .iter()
            .position(|&(z, y)| (t[(z >> 6) as usize] >> (z & 63) & 1 == 1) != y)
            .unwrap_or(sample.len());
        for c in counts.iter_mut().take(death + 1) {
            *c += 1;
        }
    }
    counts
}

/// `F` as an oracle over `q` variables. Membership queries cost one query to `f`; example
/// draws are uniform in the uniform model and recovered from `f`'s examples otherwise.
pub struct Projected<'a> {
    inner: &'a mut dyn Oracle,
    rec: &'a RelevantSetRecord,
    model: Model,
    delta: f64,
    beta: Option<f64>,
    flip: u64,
    /// First value-recovery failure, which rejects the run.
    pub failure: Option<Rejection>,
}

impl<'a> Projected<'a> {
    pub fn new(inner: &'a mut dyn Oracle, rec: &'a RelevantSetRecord, model: Model, delta: f64, beta: Option<f64>) -> Self {
        Projected { inner, rec, model, delta, beta, flip: 0, failure: None }
    }

    /// Present `F(z xor flip)` instead of `F(z)`.
    pub fn with_flip(mut self, flip: u64) -> Self {
        self.flip = flip;
        self
    }

    fn draw(&mut self, weak: bool, rng: &mut dyn RngCore) -> Point {
        let q = self.rec.q();
        let z = match self.model {
            Model::Uniform => rng.next_u64(),
            _ => {
                let u = if weak { self.inner.wexq(rng) } else { self.inner.exq(rng) };
                let u = u.and(Point::new(self.inner.n(), self.inner.free()));
                match rel_var_values(self.inner, u, self.rec, self.delta, self.beta, rng) {
                    Ok(z) => z_bits(&z),
                    Err(r) => {
                        self.failure.get_or_insert(r);
                        0
                    }
                }
            }
        };
        Point::new(q, z ^ self.flip)
    }
}

impl Oracle for Projected<'_> {
    fn n(&self) -> usize {
        self.rec.q()
    }

    fn mq(&mut self, x: Point) -> bool {
        let z = z_bools(x.bits() ^ self.flip, self.rec.q());
        eval_f(self.inner, self.rec, &z)
    }

    fn exq(&mut self, rng: &mut dyn RngCore) -> Point {
        self.draw(false, rng)
    }

    fn wexq(&mut self, rng: &mut dyn RngCore) -> Point {
        self.draw(true, rng)
    }

    fn ledger(&self) -> QueryLedger {
        self.inner.ledger()
    }
}

/// Rounds of the exact-hypothesis check: `(3/eps) ln(3/delta)` uniform or
/// `(12/eps) ln(2/delta)` distribution draws.
pub fn exact_check_rounds(epsilon: f64, delta: f64, model: Model) -> usize {
    match model {
        Model::Uniform => reps(3.0 / epsilon * (3.0 / delta).ln()),
        _ => reps(12.0 / epsilon * (2.0 / delta).ln()),
    }
}

/// Rounds of the PAC-hypothesis check: `(72/eps) ln(6/delta)`.
pub fn pac_check_rounds(epsilon: f64, delta: f64) -> usize {
    reps(72.0 / epsilon * (6.0 / delta).ln())
}

fn sign_term(rec: &RelevantSetRecord) -> Term {
    let q = rec.q();
    let pos = (0..q).filter(|&i| rec.witness_signs[i]).fold(0u64, |m, i| m | 1 << i);
    let all = if q == 64 { u64::MAX } else { (1u64 << q) - 1 };
    Term { pos, neg: all & !pos }
}

/// Expected number of example draws the learner makes, used for value-recovery confidence.
fn learner_draws(route: LearnerRoute, p: &LearnerParams, q: usize) -> usize {
    match route {
        LearnerRoute::TermFromSigns => 0,
        LearnerRoute::Monotone { .. } => monotone_draws(p),
        LearnerRoute::Polynomial { .. } => polynomial_draws(p),
        LearnerRoute::PolyUnif { .. } => poly_unif_draws(p),
        LearnerRoute::DecisionList { r, len } => {
            decision_list_sample_size(q, r, len, p.epsilon, p.delta) * if p.weak { 4 } else { 1 }
        }
    }
}

/// Run a learner (or the hint construction) on `F`, vet the hypothesis, then check it
/// against `F` on fresh points.
pub fn test_via_learner(
    o: &mut dyn Oracle,
    rec: &RelevantSetRecord,
    cfg: &ClassConfig,
    route: LearnerRoute,
    epsilon: f64,
    delta: f64,
    model: Model,
    beta: Option<f64>,
    rng: &mut dyn RngCore,
    stage: &mut Stage,
) -> Result<(), Halt> {
    let q = rec.q();
    if route == LearnerRoute::TermFromSigns {
        let h = if q == 0 {
            FunctionSpec::constant(0, eval_f(o, rec, &[]))
        } else {
            FunctionSpec::dnf(q, vec![sign_term(rec)]).map_err(|e| PipelineError::Config(e.to_string()))?
        };
        *stage = Stage::Verify;
        for _ in 0..exact_check_rounds(epsilon, delta, model) {
            let (z, y) = labeled_point(o, rec, model, 0.5, beta, rng)?;
            if h.eval_bits(z) != y {
                return Err(Rejection::Disagreement.into());
            }
        }
        return Ok(());
    }
    let weak = model == Model::Weak;
    let lp = |s: usize| LearnerParams { s, r: 1, d: 1, epsilon: epsilon / 12.0, delta: delta / 3.0, weak };
    let params = match route {
        LearnerRoute::Monotone { s, r, .. } => LearnerParams { r, ..lp(s) },
        LearnerRoute::Polynomial { s, d } => LearnerParams { d, ..lp(s) },
        LearnerRoute::PolyUnif { s } => lp(s),
        LearnerRoute::DecisionList { len, .. } => lp(len),
        LearnerRoute::TermFromSigns => unreachable!(),
    };
    let draws = learner_draws(route, &params, q).max(1);
    let flip = match route {
        LearnerRoute::Monotone { unate: true, .. } => !z_bits(&rec.witness_signs) & if q == 64 { u64::MAX } else { (1 << q) - 1 },
        _ => 0,
    };
    let mut fo = Projected::new(o, rec, model, delta / (3.0 * draws as f64), beta).with_flip(flip);
    let learned = match route {
        LearnerRoute::Monotone { .. } => learn_monotone(&mut fo, &params, rng),
        LearnerRoute::Polynomial { .. } => learn_polynomial(&mut fo, &params, rng),
        LearnerRoute::PolyUnif { .. } => learn_poly_unif(&mut fo, &params, rng),
        LearnerRoute::DecisionList { r, len } => {
            learn_decision_list(&mut fo, r, len, params.epsilon, params.delta, weak, rng)
        }
        LearnerRoute::TermFromSigns => unreachable!(),
    };
    if let Some(r) = fo.failure.take() {
        return Err(r.into());
    }
    let mut h = learned.map_err(|e| Rejection::Learner(e.to_string()))?.hypothesis;
    if flip != 0 {
        h = h.flip_inputs(flip).map_err(|e| PipelineError::Config(e.to_string()))?;
    }
    if !cfg.class.admits(&h) {
        return Err(Rejection::Learner("hypothesis outside the class".into()).into());
    }
    *stage = Stage::Verify;
    let t = pac_check_rounds(epsilon, delta);
    let mut wrong = 0usize;
    for _ in 0..t {
        let (z, y) = labeled_point(o, rec, model, delta / (3.0 * t as f64), beta, rng)?;
        if h.eval_bits(z) != y {
            wrong += 1;
        }
    }
    if wrong as f64 > epsilon / 6.0 * t as f64 {
        return Err(Rejection::Disagreement.into());
    }
    Ok(())
}

/// Run all stages on `o`. Stage failure probability is `params.stage_delta` throughout.
pub fn run_pipeline(
    o: &mut dyn Oracle,
    cfg: &ClassConfig,
    params: &PipelineParams,
    rng: &mut dyn RngCore,
) -> Result<TesterRun, PipelineError> {
    params.validate()?;
    if cfg.k == 0 {
        return Err(PipelineError::Config("junta bound must be at least 1".into()));
    }
    let mut weak_wrapper;
    let o: &mut dyn Oracle = if params.model == Model::Weak {
        weak_wrapper = WeakExamples::new(o);
        &mut weak_wrapper
    } else {
        o
    };
    let mut stage = Stage::ApproxTarget;
    let mut q = None;
    let result = stages(o, cfg, params, rng, &mut stage, &mut q);
    let ledger = o.ledger();
    match result {
        Ok(()) => Ok(TesterRun { accepted: true, stage, rejection: None, q, ledger }),
        Err(Halt::Reject(r)) => Ok(TesterRun { accepted: false, stage, rejection: Some(r), q, ledger }),
        Err(Halt::Config(e)) => Err(e),
    }
}

fn stages(
    o: &mut dyn Oracle,
    cfg: &ClassConfig,
    params: &PipelineParams,
    rng: &mut dyn RngCore,
    stage: &mut Stage,
    q_out: &mut Option<usize>,
) -> Result<(), Halt> {
    let eps = params.epsilon;
    let delta = params.stage_delta;
    let tp = TesterParams { k: cfg.k, epsilon: eps, delta, c: params.approx_c, beta: params.beta() };
    let variant = if params.improved { ApproxVariant::Improved } else { ApproxVariant::Basic };
    *stage = Stage::ApproxTarget;
    let rec = approx_target(o, &tp, variant, rng)?;
    *q_out = Some(rec.q());
    *stage = Stage::TestSets;
    test_sets(o, &rec, params.beta(), delta, rng)?;
    *stage = Stage::CloseFf;
    let mode = match (params.improved, params.model) {
        (false, _) => CloseMode::Basic,
        (true, Model::Uniform) => CloseMode::UniformPairwise,
        (true, _) => CloseMode::Improved,
    };
    close_ff(o, &rec, eps, delta, params.beta(), mode, rng)?;
    match cfg.route {
        Route::AcceptAll => Ok(()),
        Route::Enumerate(en) => {
            *stage = Stage::CloseFc;
            close_fc(o, &rec, en, eps, delta, params.model, params.rel_beta(), rng)
        }
        Route::Learn(route) => {
            *stage = Stage::Learner;
            test_via_learner(o, &rec, cfg, route, eps, delta, params.model, params.rel_beta(), rng, stage)
        }
    }
}

/// The standard composed tester for `cls`.
pub fn tester_c(
    o: &mut dyn Oracle,
    cls: ClassSpec,
    params: &PipelineParams,
    rng: &mut dyn RngCore,
) -> Result<TesterRun, PipelineError> {
    let cfg = ClassConfig::for_class(cls)?;
    run_pipeline(o, &cfg, params, rng)
}

/// `F` as an explicit function over `q` variables, read off with uncounted evaluations.
/// For tests and reports only.
pub fn projected_table(f: &dyn Fn(Point) -> bool, rec: &RelevantSetRecord, n: usize) -> Vec<bool> {
    let q = rec.q();
    (0..1u64 << q).map(|z| f(f_point(rec, n, &z_bools(z, q)))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::TruthTable;
    use crate::oracle::TargetOracle;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn var_tables_match_bits() {
        for q in 0..9 {
            for v in 0..q {
                let t = var_words(q, v);
                for j in 0..1usize << q {
                    assert_eq!(t[j >> 6] >> (j & 63) & 1 == 1, j >> v & 1 == 1);
                }
                assert!(depends_on(&t, q, v));
                for u in (0..q).filter(|&u| u != v) {
                    assert!(!depends_on(&t, q, u));
                }
            }
        }
    }

    #[test]
    fn dnf_enumerator_mentions_every_variable() {
        let mut count = 0;
        Enumerator::Dnf { s: 2, term_cap: 2 }
            .any(3, &mut |t| {
                count += 1;
                let table = TruthTable::from_fn(3, |j| t[0] >> j & 1 == 1).unwrap();
                assert_ne!(table.count_ones(), 0);
                false
            })
            .unwrap();
        assert!(count > 0);
        assert!(count as f64 <= Enumerator::Dnf { s: 2, term_cap: 2 }.bound(3));
    }

    #[test]
    fn constant_passes_junta_config() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10 {
            let mut o = TargetOracle::uniform(FunctionSpec::constant(10, true));
            let run = tester_c(&mut o, ClassSpec::Junta { k: 2 }, &PipelineParams::new(0.2, Model::Uniform), &mut rng).unwrap();
            assert!(run.accepted);
        }
    }

    #[test]
    fn dnf_without_cap_is_a_config_error() {
        assert!(ClassConfig::for_class(ClassSpec::Dnf { s: 2, term_cap: None }).is_err());
    }
}
