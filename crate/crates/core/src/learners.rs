//! Membership-query learners: monotone DNF by minterm search, sparse F2 polynomials by
//! term extraction, and a greedy decision-list learner over labeled samples.
//!
//! Every learner talks to `&mut dyn Oracle`, so the same code runs on a hidden target or
//! on a projected function simulated by the pipeline.

use rand::{Rng, RngCore};
use serde::Serialize;
use thiserror::Error;

use crate::boolfn::{cancel_monomials, mask_indices, DlRule, FunctionSpec, Mask, Point, RdlRule, Term};
use crate::junta::reps;
use crate::oracle::{Oracle, QueryLedger};

/// Parameters shared by the learners. Each learner reads only the fields it needs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LearnerParams {
    /// Term or monomial bound.
    pub s: usize,
    /// Term-size bound for monotone DNF.
    pub r: usize,
    /// Degree bound for polynomials.
    pub d: usize,
    pub epsilon: f64,
    pub delta: f64,
    /// Draw examples with `wexq` and repeat four times as often.
    pub weak: bool,
}

impl LearnerParams {
    pub fn new(s: usize, epsilon: f64, delta: f64) -> Self {
        LearnerParams { s, r: s.max(1), d: 1, epsilon, delta, weak: false }
    }

    /// The monotone learner samples `P_{1/rho}` with `rho = max(r, 2)`, since `r = 1` keeps no bit.
    pub fn rho(&self) -> usize {
        self.r.max(2)
    }

    /// Shrink budget of the monotone learner: `4 rho ln(2ns/delta)`.
    pub fn alpha_monotone(&self, n: usize) -> f64 {
        4.0 * self.rho() as f64 * (2.0 * n as f64 * self.s as f64 / self.delta).ln()
    }

    /// Shrink budget of the degree-`d` polynomial learner: `16 2^d (2 ln(s/delta) + ln n)`.
    pub fn alpha_poly(&self, n: usize) -> f64 {
        16.0 * 2f64.powi(self.d as i32) * (2.0 * (self.s as f64 / self.delta).ln() + (n.max(1) as f64).ln())
    }

    /// Shrink budget of the uniform polynomial learner: `16 (8s/epsilon)(2 ln(s/delta) + ln n)`.
    pub fn alpha_poly_unif(&self, n: usize) -> f64 {
        16.0 * (8.0 * self.s as f64 / self.epsilon)
            * (2.0 * (self.s as f64 / self.delta).ln() + (n.max(1) as f64).ln())
    }

    /// Weight above which the uniform polynomial learner skips a point: `log2(s/epsilon) + 3`.
    pub fn heavy_weight(&self) -> f64 {
        (self.s as f64 / self.epsilon).log2() + 3.0
    }

    fn example_factor(&self) -> f64 {
        if self.weak {
            4.0
        } else {
            1.0
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.s < 1 {
            return Err("s must be at least 1".into());
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(format!("epsilon {} outside (0,1)", self.epsilon));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(format!("delta {} outside (0,1)", self.delta));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq, Serialize)]
pub enum LearnError {
    #[error("shrink budget exhausted")]
    ShrinkBudget,
    #[error("more than {0} terms found")]
    TooManyTerms(usize),
    #[error("find_minterm called on a point where f is 0")]
    NotPositive,
    #[error("no consistent decision list of length at most {0}")]
    NoConsistentList(usize),
}

/// A hypothesis and whether the learner stopped through an early exit.
#[derive(Clone, Debug, PartialEq)]
pub struct Learned {
    pub hypothesis: FunctionSpec,
    pub early_exit: bool,
}

fn draw(o: &mut dyn Oracle, weak: bool, rng: &mut dyn RngCore) -> Point {
    if weak {
        o.wexq(rng)
    } else {
        o.exq(rng)
    }
}

/// A point whose coordinates are 1 with probability `1 - 1/rho`.
fn biased_point(n: usize, rho: usize, rng: &mut dyn RngCore) -> Point {
    let p0 = 1.0 / rho as f64;
    let mut bits = 0u64;
    for i in 0..n {
        if rng.gen::<f64>() >= p0 {
            bits |= 1 << i;
        }
    }
    Point::new(n, bits)
}

/// Clear 1-bits of `a` in ascending order while `f` stays 1. `f(a) = 1` is assumed.
fn shrink_to_minterm(o: &mut dyn Oracle, mut a: Point) -> Point {
    for i in mask_indices(a.bits()) {
        let b = a.with(i, false);
        if o.mq(b) {
            a = b;
        }
    }
    a
}

/// Checked minterm search: one entry query, then at most `wt(a)` more.
pub fn find_minterm(o: &mut dyn Oracle, a: Point) -> Result<Point, LearnError> {
    if !o.mq(a) {
        return Err(LearnError::NotPositive);
    }
    Ok(shrink_to_minterm(o, a))
}

/// Example draws made by [`learn_monotone`]: `4 (s/epsilon) log2(1/delta)`, times 4 when weak.
pub fn monotone_draws(p: &LearnerParams) -> usize {
    reps(p.example_factor() * 4.0 * (p.s as f64 / p.epsilon) * (1.0 / p.delta).log2())
}

/// Worst-case ledger of [`learn_monotone`]: one label per draw, then up to `s + 1` term
/// searches of `floor(alpha)` shrink steps and `r` minterm steps each.
pub fn monotone_budget(p: &LearnerParams, n: usize) -> QueryLedger {
    let draws = monotone_draws(p) as u64;
    let per_term = p.alpha_monotone(n).floor() as u64 + p.r as u64;
    examples_budget(p, draws, draws + (p.s as u64 + 1) * per_term)
}

fn examples_budget(p: &LearnerParams, draws: u64, mq: u64) -> QueryLedger {
    if p.weak {
        QueryLedger { mq, exq: 0, wexq: draws }
    } else {
        QueryLedger { mq, exq: draws, wexq: 0 }
    }
}

/// Learn an `s`-term monotone `r`-DNF. Every term found is a minterm of the target, so
/// the hypothesis implies the target pointwise.
pub fn learn_monotone(o: &mut dyn Oracle, p: &LearnerParams, rng: &mut dyn RngCore) -> Result<Learned, LearnError> {
    let n = o.n();
    let steps = p.alpha_monotone(n).floor() as usize;
    let mut terms: Vec<Mask> = Vec::new();
    let covered = |terms: &[Mask], x: Point| terms.iter().any(|&t| x.bits() & t == t);
    for _ in 0..monotone_draws(p) {
        let mut a = draw(o, p.weak, rng);
        if covered(&terms, a) || !o.mq(a) {
            continue;
        }
        let mut t = 0;
        while a.weight() > p.r {
            if t == steps {
                return Err(LearnError::ShrinkBudget);
            }
            t += 1;
            let c = a.and(biased_point(n, p.rho(), rng));
            if o.mq(c) {
                a = c;
            }
        }
        let m = shrink_to_minterm(o, a);
        terms.push(m.bits());
        if terms.len() > p.s {
            return Err(LearnError::TooManyTerms(p.s));
        }
    }
    let hypothesis = FunctionSpec::monotone_dnf(n, terms).expect("terms fit the dimension");
    Ok(Learned { hypothesis, early_exit: false })
}

/// In-place Moebius transform: table over subsets becomes ANF coefficients.
pub fn mobius(table: &mut [bool]) {
    let len = table.len();
    assert!(len.is_power_of_two());
    let mut h = 1;
    while h < len {
        for j in 0..len {
            if j & h != 0 {
                table[j] ^= table[j ^ h];
            }
        }
        h <<= 1;
    }
}

/// Query `g(a * x)` on every subset of `a`'s support and return the lexicographically least
/// monomial of its ANF, or `None` if the restriction is identically 0.
/// `g = f + h` where `h` is known, so each point costs one query.
pub fn extract_monomial(o: &mut dyn Oracle, h: &FunctionSpec, a: Point) -> Option<Mask> {
    let vars: Vec<usize> = mask_indices(a.bits()).collect();
    let w = vars.len();
    let mut table = vec![false; 1 << w];
    for (j, slot) in table.iter_mut().enumerate() {
        let bits = vars
            .iter()
            .enumerate()
            .filter(|(i, _)| j >> i & 1 == 1)
            .fold(0u64, |m, (_, &v)| m | 1 << v);
        let x = Point::new(a.n(), bits);
        *slot = o.mq(x) ^ h.evaluate(x);
    }
    mobius(&mut table);
    table
        .iter()
        .enumerate()
        .filter(|(_, &c)| c)
        .map(|(j, _)| vars.iter().enumerate().filter(|(i, _)| j >> i & 1 == 1).map(|(_, &v)| v).collect::<Vec<_>>())
        .min()
        .map(|vs| vs.iter().fold(0u64, |m, &v| m | 1 << v))
}

fn poly(n: usize, monos: &[Mask]) -> FunctionSpec {
    FunctionSpec::sparse_poly(n, monos.to_vec()).expect("monomials fit the dimension")
}

fn toggle(monos: &mut Vec<Mask>, m: Mask) {
    monos.push(m);
    *monos = cancel_monomials(std::mem::take(monos));
}

/// Example draws made by [`learn_polynomial`] at most: `(s/epsilon) ln(3s/delta)`, times 4 when weak.
pub fn polynomial_draws(p: &LearnerParams) -> usize {
    reps(p.example_factor() * (p.s as f64 / p.epsilon) * (3.0 * p.s as f64 / p.delta).ln())
}

/// Worst-case ledger of [`learn_polynomial`]: one label per draw, then up to `s + 1`
/// monomial searches of `floor(alpha)` shrink steps and `2^d` extraction queries each.
pub fn polynomial_budget(p: &LearnerParams, n: usize) -> QueryLedger {
    let draws = polynomial_draws(p) as u64;
    let per_mono = p.alpha_poly(n).floor() as u64 + (1u64 << p.d.min(63));
    examples_budget(p, draws, draws + (p.s as u64 + 1) * per_mono)
}

/// Learn an `s`-sparse degree-`d` polynomial over F2.
pub fn learn_polynomial(o: &mut dyn Oracle, p: &LearnerParams, rng: &mut dyn RngCore) -> Result<Learned, LearnError> {
    let n = o.n();
    let steps = p.alpha_poly(n).floor() as usize;
    let quiet = reps(p.example_factor() * (3.0 * p.s as f64 / p.delta).ln() / p.epsilon);
    let mut monos: Vec<Mask> = Vec::new();
    let mut h = poly(n, &monos);
    let mut t = 0;
    for _ in 0..polynomial_draws(p) {
        let mut a = draw(o, p.weak, rng);
        t += 1;
        if o.mq(a) != h.evaluate(a) {
            let mut m = 0;
            while m < steps && a.weight() > p.d {
                m += 1;
                let c = a.and(Point::new(n, rng.next_u64()));
                if o.mq(c) != h.evaluate(c) {
                    a = c;
                }
            }
            if a.weight() > p.d {
                return Err(LearnError::ShrinkBudget);
            }
            let mono = extract_monomial(o, &h, a).expect("(f+h)(a) = 1 so the restriction is nonzero");
            toggle(&mut monos, mono);
            if monos.len() > p.s {
                return Err(LearnError::TooManyTerms(p.s));
            }
            h = poly(n, &monos);
            t = 0;
        }
        if t >= quiet {
            return Ok(Learned { hypothesis: h, early_exit: true });
        }
    }
    Ok(Learned { hypothesis: h, early_exit: false })
}

/// Example draws made by [`learn_poly_unif`] at most:
/// `(s/epsilon) ln(3s/delta) log2(3s/delta)`.
pub fn poly_unif_draws(p: &LearnerParams) -> usize {
    let l = 3.0 * p.s as f64 / p.delta;
    reps((p.s as f64 / p.epsilon) * l.ln() * l.log2())
}

/// Worst-case ledger of [`learn_poly_unif`]: one label per draw; between two new monomials at
/// most `log2(3s/delta)` shrinks run, each of `floor(alpha)` steps; extraction reads at most
/// `2^heavy = 8s/epsilon` points.
pub fn poly_unif_budget(p: &LearnerParams, n: usize) -> QueryLedger {
    let draws = poly_unif_draws(p) as u64;
    let streak = reps((3.0 * p.s as f64 / p.delta).log2()) as u64;
    let rounds = p.s as u64 + 1;
    let extract = 2f64.powf(p.heavy_weight().floor()) as u64;
    let mq = draws + rounds * (streak * p.alpha_poly_unif(n).floor() as u64 + extract);
    QueryLedger { mq, exq: draws, wexq: 0 }
}

/// Learn an `s`-sparse polynomial of any degree under the uniform law. Points that stay
/// heavier than `log2(s/epsilon) + 3` are skipped; `log2(3s/delta)` positive draws in a row
/// without a new term end the run early.
pub fn learn_poly_unif(o: &mut dyn Oracle, p: &LearnerParams, rng: &mut dyn RngCore) -> Result<Learned, LearnError> {
    let n = o.n();
    let steps = p.alpha_poly_unif(n).floor() as usize;
    let heavy = p.heavy_weight();
    let streak = reps((3.0 * p.s as f64 / p.delta).log2());
    let quiet = reps((3.0 * p.s as f64 / p.delta).ln() / p.epsilon);
    let mut monos: Vec<Mask> = Vec::new();
    let mut h = poly(n, &monos);
    let (mut t, mut w) = (0, 0);
    for _ in 0..poly_unif_draws(p) {
        let mut a = o.exq(rng);
        t += 1;
        if o.mq(a) != h.evaluate(a) {
            w += 1;
            if w >= streak {
                return Ok(Learned { hypothesis: h, early_exit: true });
            }
            let mut m = 0;
            while m < steps && a.weight() as f64 > heavy {
                m += 1;
                let c = a.and(Point::new(n, rng.next_u64()));
                if o.mq(c) != h.evaluate(c) {
                    a = c;
                }
            }
            if a.weight() as f64 <= heavy {
                w = 0;
                let mono = extract_monomial(o, &h, a).expect("(f+h)(a) = 1 so the restriction is nonzero");
                toggle(&mut monos, mono);
                if monos.len() > p.s {
                    return Err(LearnError::TooManyTerms(p.s));
                }
                h = poly(n, &monos);
            }
            t = 0;
        }
        if t >= quiet {
            return Ok(Learned { hypothesis: h, early_exit: true });
        }
    }
    Ok(Learned { hypothesis: h, early_exit: false })
}

/// Sample size of the decision-list learner: `4 (k ln n + ln(1/delta)) / epsilon` with
/// `k = len * r` rule literals.
pub fn decision_list_sample_size(n: usize, r: usize, len: usize, epsilon: f64, delta: f64) -> usize {
    let k = (len * r.max(1)) as f64;
    reps(4.0 * (k * (n.max(1) as f64).ln() + (1.0 / delta).ln()) / epsilon)
}

/// Conjunctions of 1 to `r` literals over `n` variables.
fn rule_terms(n: usize, r: usize) -> Vec<Term> {
    let mut out = Vec::new();
    let mut stack: Vec<(Term, usize)> = vec![(Term::positive(0), 0)];
    while let Some((t, from)) = stack.pop() {
        if t.size() > 0 {
            out.push(t);
        }
        if t.size() == r {
            continue;
        }
        for v in from..n {
            for neg in [false, true] {
                let lit = 1u64 << v;
                let next = if neg { Term { pos: t.pos, neg: t.neg | lit } } else { Term { pos: t.pos | lit, neg: t.neg } };
                stack.push((next, v + 1));
            }
        }
    }
    out.sort_by_key(|t| (t.size(), t.vars(), t.neg));
    out
}

/// Rules consistent with every live example they cover, covering at least one, with coverage.
fn consistent_rules(sample: &[(Point, bool)], live: &[usize], terms: &[Term]) -> Vec<(RdlRule, usize)> {
    let mut out = Vec::new();
    for t in terms {
        let mut seen = [0usize; 2];
        for &j in live {
            let (x, y) = sample[j];
            if t.eval(x.bits()) {
                seen[y as usize] += 1;
            }
        }
        for o in [false, true] {
            if seen[o as usize] > 0 && seen[!o as usize] == 0 {
                out.push((RdlRule { term: *t, xi: true, out: o }, seen[o as usize]));
            }
        }
    }
    out
}

fn unanimous(sample: &[(Point, bool)], live: &[usize]) -> Option<bool> {
    match live.first() {
        None => Some(false),
        Some(&j) => {
            let y = sample[j].1;
            live.iter().all(|&i| sample[i].1 == y).then_some(y)
        }
    }
}

fn dfs(sample: &[(Point, bool)], live: &[usize], terms: &[Term], left: usize, acc: &mut Vec<RdlRule>) -> Option<bool> {
    if let Some(y) = unanimous(sample, live) {
        return Some(y);
    }
    if left == 0 {
        return None;
    }
    let mut cands = consistent_rules(sample, live, terms);
    cands.sort_by(|a, b| b.1.cmp(&a.1));
    for (rule, _) in cands {
        let rest: Vec<usize> = live.iter().copied().filter(|&j| !rule.term.eval(sample[j].0.bits())).collect();
        acc.push(rule);
        if let Some(d) = dfs(sample, &rest, terms, left - 1, acc) {
            return Some(d);
        }
        acc.pop();
    }
    None
}

fn to_list(n: usize, r: usize, rules: Vec<RdlRule>, default: bool) -> FunctionSpec {
    if r <= 1 {
        let rules = rules
            .into_iter()
            .map(|q| {
                let var = q.term.vars().trailing_zeros() as usize;
                DlRule { var, xi: q.term.pos != 0, out: q.out }
            })
            .collect();
        FunctionSpec::decision_list(n, rules, default).expect("rules fit")
    } else {
        FunctionSpec::r_decision_list(n, rules, default).expect("rules fit")
    }
}

/// Fit a list of at most `len` rules, each a conjunction of at most `r` literals, to a
/// labeled sample. `r = 1` yields a plain decision list.
///
/// Greedy cover first, taking the rule that covers the most remaining examples; if that
/// list is too long, an exhaustive search over lists of length `<= len` decides.
pub fn rivest_cover(sample: &[(Point, bool)], n: usize, r: usize, len: usize) -> Result<FunctionSpec, LearnError> {
    let terms = rule_terms(n, r.max(1));
    let mut live: Vec<usize> = (0..sample.len()).collect();
    let mut rules = Vec::new();
    let greedy = loop {
        if let Some(y) = unanimous(sample, &live) {
            break Some(y);
        }
        let Some((rule, _)) = consistent_rules(sample, &live, &terms).into_iter().rev().max_by_key(|c| c.1) else {
            break None;
        };
        live.retain(|&j| !rule.term.eval(sample[j].0.bits()));
        rules.push(rule);
    };
    let Some(default) = greedy else {
        return Err(LearnError::NoConsistentList(len));
    };
    if rules.len() <= len {
        return Ok(to_list(n, r, rules, default));
    }
    let mut acc = Vec::new();
    let all: Vec<usize> = (0..sample.len()).collect();
    match dfs(sample, &all, &terms, len, &mut acc) {
        Some(default) => Ok(to_list(n, r, acc, default)),
        None => Err(LearnError::NoConsistentList(len)),
    }
}

/// Ledger of [`learn_decision_list`]: one draw and one label per sample point.
pub fn decision_list_budget(n: usize, r: usize, len: usize, epsilon: f64, delta: f64, weak: bool) -> QueryLedger {
    let mut m = decision_list_sample_size(n, r, len, epsilon, delta) as u64;
    if weak {
        m *= 4;
        return QueryLedger { mq: m, exq: 0, wexq: m };
    }
    QueryLedger { mq: m, exq: m, wexq: 0 }
}

/// Draw a labeled sample (one example draw plus one membership query per point) and fit
/// a list of at most `len` rules of at most `r` literals.
pub fn learn_decision_list(
    o: &mut dyn Oracle,
    r: usize,
    len: usize,
    epsilon: f64,
    delta: f64,
    weak: bool,
    rng: &mut dyn RngCore,
) -> Result<Learned, LearnError> {
    let n = o.n();
    let mut m = decision_list_sample_size(n, r, len, epsilon, delta);
    if weak {
        m *= 4;
    }
    let sample: Vec<(Point, bool)> = (0..m)
        .map(|_| {
            let x = draw(o, weak, rng);
            (x, o.mq(x))
        })
        .collect();
    rivest_cover(&sample, n, r, len).map(|hypothesis| Learned { hypothesis, early_exit: false })
}
