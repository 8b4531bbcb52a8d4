//! Class descriptors and brute-force distance to a class.
//!
//! The search runs over the relevant variables of the target whenever the class is
//! closed under fixing variables and the distribution is a product measure. Averaging
//! over the irrelevant coordinates then shows some nearest member ignores them.

use serde::{Deserialize, Serialize};

use super::dist::{Distribution, Weights};
use super::point::{full_mask, mask_indices, Mask};
use super::spec::{FunctionSpec, Repr, TreeNode};
use super::table::{TruthTable, MAX_TABLE_N};
use super::BoolFnError;

/// Default cap on enumeration work, in candidate-table words.
pub const DEFAULT_WORK_BUDGET: u64 = 10_000_000;

/// A class of Boolean functions with its size parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum ClassSpec {
    Junta { k: usize },
    Linear { k: usize },
    /// Conjunctions of at most `k` literals, plus the constant 0.
    Term { k: usize },
    MonotoneDnf { s: usize, r: usize },
    UnateDnf { s: usize, r: usize },
    /// At most `s` terms; `term_cap` bounds the term size when set.
    Dnf { s: usize, term_cap: Option<usize> },
    SparsePoly { s: usize, d: usize },
    DecisionList { len: usize },
    RDecisionList { r: usize, len: usize },
    /// At most `size` leaves.
    DecisionTree { size: usize },
}

impl ClassSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ClassSpec::Junta { .. } => "junta",
            ClassSpec::Linear { .. } => "linear",
            ClassSpec::Term { .. } => "term",
            ClassSpec::MonotoneDnf { .. } => "monotone_dnf",
            ClassSpec::UnateDnf { .. } => "unate_dnf",
            ClassSpec::Dnf { .. } => "dnf",
            ClassSpec::SparsePoly { .. } => "poly_f2",
            ClassSpec::DecisionList { .. } => "decision_list",
            ClassSpec::RDecisionList { .. } => "r_decision_list",
            ClassSpec::DecisionTree { .. } => "decision_tree",
        }
    }

    /// Upper bound on the number of relevant variables of a member, when one exists.
    pub fn junta_bound(&self) -> Option<usize> {
        match *self {
            ClassSpec::Junta { k } | ClassSpec::Linear { k } | ClassSpec::Term { k } => Some(k),
            ClassSpec::MonotoneDnf { s, r } | ClassSpec::UnateDnf { s, r } => Some(s * r),
            ClassSpec::Dnf { s, term_cap: Some(c) } => Some(s * c),
            ClassSpec::Dnf { term_cap: None, .. } => None,
            ClassSpec::SparsePoly { s, d } => Some(s * d),
            ClassSpec::DecisionList { len } => Some(len),
            ClassSpec::RDecisionList { r, len } => Some(r * len),
            ClassSpec::DecisionTree { size } => Some(size.saturating_sub(1)),
        }
    }

    /// True when fixing a variable to a constant keeps a member inside the class.
    fn restriction_closed(&self) -> bool {
        !matches!(self, ClassSpec::Linear { .. })
    }

    /// Representation-level membership, used to vet learner output.
    pub fn admits(&self, spec: &FunctionSpec) -> bool {
        let pc = |m: &Mask| m.count_ones() as usize;
        match (*self, spec.repr()) {
            (ClassSpec::Junta { k }, _) => pc(&spec.mentioned_vars()) <= k,
            (ClassSpec::Linear { k }, Repr::Linear(s)) => pc(s) <= k,
            (ClassSpec::Term { k }, Repr::Dnf(ts)) => ts.is_empty() || (ts.len() == 1 && ts[0].size() <= k),
            (ClassSpec::MonotoneDnf { s, r }, Repr::MonotoneDnf(ts)) => {
                ts.len() <= s && ts.iter().all(|t| pc(t) <= r)
            }
            (ClassSpec::MonotoneDnf { s, r }, Repr::Dnf(ts)) => {
                ts.len() <= s && ts.iter().all(|t| t.neg == 0 && t.size() <= r)
            }
            (ClassSpec::UnateDnf { s, r }, Repr::MonotoneDnf(ts)) => {
                ts.len() <= s && ts.iter().all(|t| pc(t) <= r)
            }
            (ClassSpec::UnateDnf { s, r }, Repr::Dnf(ts)) => {
                let pos = ts.iter().fold(0, |a, t| a | t.pos);
                let neg = ts.iter().fold(0, |a, t| a | t.neg);
                ts.len() <= s && pos & neg == 0 && ts.iter().all(|t| t.size() <= r)
            }
            (ClassSpec::Dnf { s, term_cap }, Repr::Dnf(ts)) => {
                ts.len() <= s && ts.iter().all(|t| term_cap.map_or(true, |c| t.size() <= c))
            }
            (ClassSpec::Dnf { s, term_cap }, Repr::MonotoneDnf(ts)) => {
                ts.len() <= s && ts.iter().all(|t| term_cap.map_or(true, |c| pc(t) <= c))
            }
            (ClassSpec::SparsePoly { s, d }, Repr::SparsePoly(ms)) => {
                ms.len() <= s && ms.iter().all(|m| pc(m) <= d)
            }
            (ClassSpec::DecisionList { len }, Repr::DecisionList { rules, .. }) => rules.len() <= len,
            (ClassSpec::RDecisionList { r, len }, Repr::RDecisionList { rules, .. }) => {
                rules.len() <= len && rules.iter().all(|q| q.term.size() <= r)
            }
            (ClassSpec::RDecisionList { len, .. }, Repr::DecisionList { rules, .. }) => rules.len() <= len,
            (ClassSpec::DecisionTree { size }, Repr::DecisionTree(nodes)) => {
                nodes.iter().filter(|n| matches!(n, TreeNode::Leaf(_))).count() <= size
            }
            _ => false,
        }
    }
}

/// Exact `Pr_{x ~ d}[a(x) != b(x)]`.
pub fn distance(a: &FunctionSpec, b: &FunctionSpec, d: &Distribution) -> Result<f64, BoolFnError> {
    if a.n() != b.n() {
        return Err(BoolFnError::DimensionMismatch { expected: a.n(), got: b.n() });
    }
    let n = a.n();
    if let Distribution::Explicit(e) = d {
        if e.points()[0].n() != n {
            return Err(BoolFnError::DimensionMismatch { expected: n, got: e.points()[0].n() });
        }
        return Ok(e
            .points()
            .iter()
            .zip(e.weights())
            .filter(|(p, _)| a.eval_bits(p.bits()) != b.eval_bits(p.bits()))
            .map(|(_, w)| w)
            .sum());
    }
    let ta = TruthTable::from_spec(a)?;
    let tb = TruthTable::from_spec(b)?;
    let diff: Vec<u64> = ta.words().iter().zip(tb.words()).map(|(x, y)| x ^ y).collect();
    Ok(d.weights(n)?.mass(n, &diff))
}

/// Exactly the coordinates that can change the value, found by exhaustive flips.
pub fn relevant_variables(spec: &FunctionSpec) -> Result<Mask, BoolFnError> {
    Ok(TruthTable::from_spec(spec)?.relevant_variables())
}

/// `min_{g in cls} distance(spec, g, d)`, refused past `DEFAULT_WORK_BUDGET`.
pub fn distance_to_class(spec: &FunctionSpec, cls: &ClassSpec, d: &Distribution) -> Result<f64, BoolFnError> {
    distance_to_class_with_budget(spec, cls, d, DEFAULT_WORK_BUDGET)
}

pub fn distance_to_class_with_budget(
    spec: &FunctionSpec,
    cls: &ClassSpec,
    d: &Distribution,
    budget: u64,
) -> Result<f64, BoolFnError> {
    let n = spec.n();
    if n > MAX_TABLE_N {
        return Err(BoolFnError::TooLarge { n, max: MAX_TABLE_N });
    }
    let table = TruthTable::from_spec(spec)?;
    let relevant = table.relevant_variables();
    let project = !matches!(d, Distribution::Explicit(_))
        && (cls.restriction_closed() || matches!(d, Distribution::Uniform));
    let vars: Vec<usize> = if project {
        mask_indices(relevant).collect()
    } else {
        (0..n).collect()
    };
    let dm = vars.len();
    let f = project_table(&table, &vars);
    let weights = match d {
        Distribution::Uniform => Weights::Uniform,
        Distribution::ProductBias(p) => {
            if p.len() != n {
                return Err(BoolFnError::DimensionMismatch { expected: n, got: p.len() });
            }
            let sub: Vec<f64> = vars.iter().map(|&v| p[v]).collect();
            Distribution::ProductBias(sub).weights(dm)?
        }
        Distribution::Explicit(_) => d.weights(n)?,
    };
    let mut s = Search::new(f, dm, weights, budget);
    match *cls {
        ClassSpec::Junta { k } => s.junta(k)?,
        ClassSpec::Linear { k } => {
            s.linear(k)?;
            if project && dm < n && k >= 1 {
                // A parity that reaches outside the relevant set is at distance exactly 1/2.
                s.offer(0.5);
            }
        }
        ClassSpec::Term { k } => {
            let terms = s.terms(k.min(dm), false);
            s.constant()?;
            for t in &terms {
                s.charge(1)?;
                s.score(t);
            }
        }
        ClassSpec::MonotoneDnf { s: st, r } => {
            let terms = s.terms(r.min(dm), true);
            s.combos(&terms, st, Combine::Or)?;
        }
        ClassSpec::UnateDnf { s: st, r } => {
            let base = s.terms(r.min(dm), true);
            for flip in 0..(1u64 << dm) {
                let terms: Vec<Vec<u64>> = base
                    .iter()
                    .map(|t| s.flip_table(t, flip))
                    .collect();
                s.combos(&terms, st, Combine::Or)?;
                if s.best == 0.0 {
                    break;
                }
            }
        }
        ClassSpec::Dnf { s: st, term_cap } => {
            let cap = term_cap.unwrap_or(dm).min(dm);
            let terms = s.terms(cap, false);
            s.combos(&terms, st, Combine::Or)?;
        }
        ClassSpec::SparsePoly { s: st, d: deg } => {
            let monos = s.terms(deg.min(dm), true);
            s.combos(&monos, st, Combine::Xor)?;
        }
        ClassSpec::DecisionList { len } => s.decision_list(len)?,
        ClassSpec::DecisionTree { size } => s.decision_tree(size)?,
        ClassSpec::RDecisionList { r, len } => s.r_decision_list(r, len)?,
    }
    Ok(s.result())
}

/// Table of `f` over the listed coordinates, the others held at 0.
fn project_table(t: &TruthTable, vars: &[usize]) -> Vec<u64> {
    let dm = vars.len();
    let mut out = vec![0u64; words(dm)];
    for j in 0..(1usize << dm) {
        let mut x = 0usize;
        for (b, &v) in vars.iter().enumerate() {
            if j >> b & 1 == 1 {
                x |= 1 << v;
            }
        }
        if t.get(x) {
            out[j >> 6] |= 1 << (j & 63);
        }
    }
    out
}

fn words(dm: usize) -> usize {
    ((1usize << dm) + 63) / 64
}

#[derive(Clone, Copy)]
enum Combine {
    Or,
    Xor,
}

struct Search {
    f: Vec<u64>,
    dm: usize,
    weights: Weights,
    scratch: Vec<u64>,
    best: f64,
    work: u64,
    budget: u64,
    var_tables: Vec<Vec<u64>>,
}

impl Search {
    fn new(f: Vec<u64>, dm: usize, weights: Weights, budget: u64) -> Self {
        let w = words(dm);
        let size = 1usize << dm;
        let var_tables = (0..dm)
            .map(|t| {
                let mut v = vec![0u64; w];
                for j in 0..size {
                    if j >> t & 1 == 1 {
                        v[j >> 6] |= 1 << (j & 63);
                    }
                }
                v
            })
            .collect();
        Search {
            f,
            dm,
            weights,
            scratch: vec![0; w],
            best: f64::INFINITY,
            work: 0,
            budget,
            var_tables,
        }
    }

    fn domain_mask(&self) -> u64 {
        if self.dm >= 6 {
            u64::MAX
        } else {
            full_mask(1 << self.dm)
        }
    }

    fn charge(&mut self, candidates: u64) -> Result<(), BoolFnError> {
        self.work += candidates * self.f.len() as u64;
        if self.work > self.budget {
            return Err(BoolFnError::WorkBudget { budget: self.budget });
        }
        Ok(())
    }

    fn offer(&mut self, d: f64) {
        if d < self.best {
            self.best = d;
        }
    }

    fn score(&mut self, cand: &[u64]) {
        let d = match &self.weights {
            Weights::Uniform => {
                let c: u64 = cand
                    .iter()
                    .zip(&self.f)
                    .map(|(a, b)| (a ^ b).count_ones() as u64)
                    .sum();
                c as f64 / (1u64 << self.dm) as f64
            }
            w => {
                for ((s, a), b) in self.scratch.iter_mut().zip(cand).zip(&self.f) {
                    *s = a ^ b;
                }
                w.mass(self.dm, &self.scratch)
            }
        };
        self.offer(d);
    }

    fn result(&self) -> f64 {
        // Float sums can leave dust below zero or a hair above an exact value.
        if self.best < 1e-12 {
            0.0
        } else {
            self.best
        }
    }

    fn constant(&mut self) -> Result<(), BoolFnError> {
        self.charge(2)?;
        let zero = vec![0u64; self.f.len()];
        let mask = self.domain_mask();
        let one: Vec<u64> = vec![mask; self.f.len()];
        self.score(&zero);
        self.score(&one);
        Ok(())
    }

    /// Tables of all terms of size at most `k`, the empty term included.
    fn terms(&self, k: usize, monotone: bool) -> Vec<Vec<u64>> {
        let mask = self.domain_mask();
        let mut out = Vec::new();
        let full = full_mask(self.dm);
        for vars in 0..(1u64 << self.dm) {
            if vars & full != vars || vars.count_ones() as usize > k {
                continue;
            }
            let signs: Vec<u64> = if monotone {
                vec![vars]
            } else {
                // Every sub-mask of `vars` chooses which literals are positive.
                let mut v = Vec::new();
                let mut sub = vars;
                loop {
                    v.push(sub);
                    if sub == 0 {
                        break;
                    }
                    sub = (sub - 1) & vars;
                }
                v
            };
            for pos in signs {
                let mut t = vec![mask; self.f.len()];
                for i in mask_indices(vars) {
                    let vt = &self.var_tables[i];
                    for (w, v) in t.iter_mut().zip(vt) {
                        *w &= if pos >> i & 1 == 1 { *v } else { !*v & mask };
                    }
                }
                out.push(t);
            }
        }
        out
    }

    fn flip_table(&self, t: &[u64], flip: u64) -> Vec<u64> {
        let size = 1usize << self.dm;
        let mut out = vec![0u64; t.len()];
        for j in 0..size {
            if t[j >> 6] >> (j & 63) & 1 == 1 {
                let jj = j ^ flip as usize;
                out[jj >> 6] |= 1 << (jj & 63);
            }
        }
        out
    }

    /// Every combination of at most `s` tables, combined by OR or XOR.
    fn combos(&mut self, items: &[Vec<u64>], s: usize, how: Combine) -> Result<(), BoolFnError> {
        let zero = vec![0u64; self.f.len()];
        self.charge(1)?;
        self.score(&zero);
        let mut stack: Vec<Vec<u64>> = vec![zero];
        self.dfs(items, 0, s, how, &mut stack)
    }

    fn dfs(
        &mut self,
        items: &[Vec<u64>],
        start: usize,
        left: usize,
        how: Combine,
        stack: &mut Vec<Vec<u64>>,
    ) -> Result<(), BoolFnError> {
        if left == 0 || self.best == 0.0 {
            return Ok(());
        }
        for i in start..items.len() {
            self.charge(1)?;
            let top = stack.last().unwrap();
            let next: Vec<u64> = match how {
                Combine::Or => top.iter().zip(&items[i]).map(|(a, b)| a | b).collect(),
                Combine::Xor => top.iter().zip(&items[i]).map(|(a, b)| a ^ b).collect(),
            };
            self.score(&next);
            stack.push(next);
            self.dfs(items, i + 1, left - 1, how, stack)?;
            stack.pop();
            if self.best == 0.0 {
                return Ok(());
            }
        }
        Ok(())
    }

    fn linear(&mut self, k: usize) -> Result<(), BoolFnError> {
        let full = full_mask(self.dm);
        for set in 0..(1u64 << self.dm) {
            if set & full != set || set.count_ones() as usize > k {
                continue;
            }
            self.charge(1)?;
            let mut t = vec![0u64; self.f.len()];
            for i in mask_indices(set) {
                for (w, v) in t.iter_mut().zip(&self.var_tables[i]) {
                    *w ^= v;
                }
            }
            self.score(&t);
        }
        Ok(())
    }

    /// Per-point weights, scaled to integers for the uniform case so ties stay exact.
    fn point_weights(&self) -> Vec<f64> {
        let size = 1usize << self.dm;
        match &self.weights {
            Weights::Uniform => vec![1.0; size],
            Weights::Dense(w) => w.clone(),
            Weights::Sparse(pts) => {
                let mut w = vec![0.0; size];
                for &(j, p) in pts {
                    w[j as usize] += p;
                }
                w
            }
        }
    }

    fn normalizer(&self) -> f64 {
        match self.weights {
            Weights::Uniform => (1u64 << self.dm) as f64,
            _ => 1.0,
        }
    }

    fn fbit(&self, j: usize) -> bool {
        self.f[j >> 6] >> (j & 63) & 1 == 1
    }

    fn junta(&mut self, k: usize) -> Result<(), BoolFnError> {
        if k >= self.dm {
            self.offer(0.0);
            return Ok(());
        }
        let pw = self.point_weights();
        let norm = self.normalizer();
        let size = 1usize << self.dm;
        let full = full_mask(self.dm);
        for set in 0..(1u64 << self.dm) {
            if set & full != set || set.count_ones() as usize != k {
                continue;
            }
            self.charge(1)?;
            // Plurality vote inside each cell of the partition induced by `set`.
            let cells = 1usize << k;
            let idx: Vec<usize> = mask_indices(set).collect();
            let mut ones = vec![0.0; cells];
            let mut zeros = vec![0.0; cells];
            for j in 0..size {
                let mut c = 0usize;
                for (b, &i) in idx.iter().enumerate() {
                    c |= (j >> i & 1) << b;
                }
                if self.fbit(j) {
                    ones[c] += pw[j];
                } else {
                    zeros[c] += pw[j];
                }
            }
            let err: f64 = ones.iter().zip(&zeros).map(|(a, b)| a.min(*b)).sum();
            self.offer(err / norm);
        }
        Ok(())
    }

    /// Masses of f=1 and of all points on every subcube, subcubes indexed in base 3
    /// (digit 2 = free coordinate).
    fn cube_masses(&self) -> (Vec<f64>, Vec<f64>) {
        let dm = self.dm;
        let pw = self.point_weights();
        let n3 = 3usize.pow(dm as u32);
        let mut one = vec![0.0; n3];
        let mut all = vec![0.0; n3];
        let pow3: Vec<usize> = (0..dm).map(|t| 3usize.pow(t as u32)).collect();
        for c in 0..n3 {
            let mut rest = c;
            let mut free_at = None;
            let mut j = 0usize;
            for (t, _) in pow3.iter().enumerate() {
                let digit = rest % 3;
                rest /= 3;
                if digit == 2 {
                    free_at.get_or_insert(t);
                } else if digit == 1 {
                    j |= 1 << t;
                }
            }
            match free_at {
                None => {
                    all[c] = pw[j];
                    one[c] = if self.fbit(j) { pw[j] } else { 0.0 };
                }
                Some(t) => {
                    let c0 = c - 2 * pow3[t];
                    let c1 = c - pow3[t];
                    all[c] = all[c0] + all[c1];
                    one[c] = one[c0] + one[c1];
                }
            }
        }
        (one, all)
    }

    fn dp_work(&mut self, per_state: u64) -> Result<(), BoolFnError> {
        if self.dm > 16 {
            return Err(BoolFnError::WorkBudget { budget: self.budget });
        }
        let states = 3u64.pow(self.dm as u32);
        self.work += states * per_state.max(1);
        if self.work > self.budget {
            return Err(BoolFnError::WorkBudget { budget: self.budget });
        }
        Ok(())
    }

    /// Exact optimum over lists of at most `len` rules, by dynamic programming on subcubes.
    /// After a rule on `x_i` fires for one value the rest of the list sees the other, so no
    /// list needs to test a variable twice.
    fn decision_list(&mut self, len: usize) -> Result<(), BoolFnError> {
        let len = len.min(self.dm);
        self.dp_work((len as u64 + 1) * 2 * self.dm as u64)?;
        let (one, all) = self.cube_masses();
        let n3 = one.len();
        let dm = self.dm;
        let pow3: Vec<usize> = (0..dm).map(|t| 3usize.pow(t as u32)).collect();
        let leaf: Vec<f64> = (0..n3).map(|c| one[c].min(all[c] - one[c])).collect();
        let mut prev = leaf.clone();
        for _ in 0..len {
            let mut cur = leaf.clone();
            for c in 0..n3 {
                let mut rest = c;
                for t in 0..dm {
                    let digit = rest % 3;
                    rest /= 3;
                    if digit != 2 {
                        continue;
                    }
                    let c0 = c - 2 * pow3[t];
                    let c1 = c - pow3[t];
                    for (fire, other) in [(c0, c1), (c1, c0)] {
                        let err_fire = one[fire].min(all[fire] - one[fire]);
                        let v = err_fire + prev[other];
                        if v < cur[c] {
                            cur[c] = v;
                        }
                    }
                }
            }
            prev = cur;
        }
        let top = n3 - 1;
        let norm = self.normalizer();
        self.offer(prev[top].max(0.0) / norm);
        Ok(())
    }

    /// Exact optimum over trees with at most `size` leaves.
    fn decision_tree(&mut self, size: usize) -> Result<(), BoolFnError> {
        let size = size.max(1);
        self.dp_work((size * size) as u64 * self.dm as u64)?;
        let (one, all) = self.cube_masses();
        let n3 = one.len();
        let dm = self.dm;
        let pow3: Vec<usize> = (0..dm).map(|t| 3usize.pow(t as u32)).collect();
        // best[s][c]: trees with at most s+1 leaves.
        let mut best: Vec<Vec<f64>> = vec![(0..n3).map(|c| one[c].min(all[c] - one[c])).collect()];
        for s in 1..size {
            let mut cur = best[s - 1].clone();
            for c in 0..n3 {
                let mut rest = c;
                for t in 0..dm {
                    let digit = rest % 3;
                    rest /= 3;
                    if digit != 2 {
                        continue;
                    }
                    let c0 = c - 2 * pow3[t];
                    let c1 = c - pow3[t];
                    // Leaves split as (a+1) + (s-a), i.e. a from 0 to s-1.
                    for a in 0..s {
                        let v = best[a][c0] + best[s - 1 - a][c1];
                        if v < cur[c] {
                            cur[c] = v;
                        }
                    }
                }
            }
            best.push(cur);
        }
        let norm = self.normalizer();
        self.offer(best[size - 1][n3 - 1].max(0.0) / norm);
        Ok(())
    }

    /// Depth-first search over r-decision lists, pruned by the error accumulated so far.
    fn r_decision_list(&mut self, r: usize, len: usize) -> Result<(), BoolFnError> {
        let terms = self.terms(r.min(self.dm), false);
        let mask = self.domain_mask();
        let region = vec![mask; self.f.len()];
        let pw = self.point_weights();
        let norm = self.normalizer();
        let mut best = f64::INFINITY;
        self.rdl_dfs(&terms, &pw, region, 0.0, len, &mut best)?;
        self.offer(best / norm);
        Ok(())
    }

    fn region_masses(&self, region: &[u64], pw: &[f64]) -> (f64, f64) {
        let (mut one, mut all) = (0.0, 0.0);
        for (wi, &word) in region.iter().enumerate() {
            let mut rest = word;
            while rest != 0 {
                let b = rest.trailing_zeros() as usize;
                let j = wi * 64 + b;
                all += pw[j];
                if self.fbit(j) {
                    one += pw[j];
                }
                rest &= rest - 1;
            }
        }
        (one, all)
    }

    fn rdl_dfs(
        &mut self,
        terms: &[Vec<u64>],
        pw: &[f64],
        region: Vec<u64>,
        cost: f64,
        left: usize,
        best: &mut f64,
    ) -> Result<(), BoolFnError> {
        self.charge(1)?;
        let (one, all) = self.region_masses(&region, pw);
        let leaf = cost + one.min(all - one);
        if leaf < *best {
            *best = leaf;
        }
        if left == 0 || cost >= *best || region.iter().all(|&w| w == 0) {
            return Ok(());
        }
        let mask = self.domain_mask();
        for t in terms {
            for xi in [true, false] {
                let fire: Vec<u64> = region
                    .iter()
                    .zip(t)
                    .map(|(r, tw)| r & if xi { *tw } else { !tw & mask })
                    .collect();
                if fire.iter().all(|&w| w == 0) || fire == region {
                    continue;
                }
                let (fo, fa) = self.region_masses(&fire, pw);
                let err = fo.min(fa - fo);
                if cost + err >= *best {
                    continue;
                }
                let rest: Vec<u64> = region.iter().zip(&fire).map(|(r, f)| r & !f).collect();
                self.rdl_dfs(terms, pw, rest, cost + err, left - 1, best)?;
                if *best == 0.0 {
                    return Ok(());
                }
            }
        }
        Ok(())
    }
}

/// Whether `spec` belongs to `cls` semantically, by zero distance under the uniform law.
pub fn is_member(spec: &FunctionSpec, cls: &ClassSpec) -> Result<bool, BoolFnError> {
    Ok(distance_to_class(spec, cls, &Distribution::Uniform)? == 0.0)
}
