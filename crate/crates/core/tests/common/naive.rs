//! Slow second implementations of the ground truth: evaluation by walking the
//! representation bit by bit, flips for relevance, summed point weights for distance and
//! explicit member enumeration for distance to a class (n <= 4).

use std::collections::BTreeSet;

use bftest::boolfn::{ClassSpec, Distribution, FunctionSpec, Mask, Repr, TreeNode};
use bftest::harness::acceptance::SecondOracle;

pub const SECOND: SecondOracle = SecondOracle { table, relevant, distance, distance_to_class };

fn bit(x: u64, i: usize) -> bool {
    x >> i & 1 == 1
}

fn term_holds(pos: Mask, neg: Mask, n: usize, x: u64) -> bool {
    (0..n).all(|i| {
        if bit(pos, i) {
            bit(x, i)
        } else if bit(neg, i) {
            !bit(x, i)
        } else {
            true
        }
    })
}

pub fn eval(f: &FunctionSpec, x: u64) -> bool {
    let n = f.n();
    match f.repr() {
        Repr::TruthTable(t) => t.get(x as usize),
        Repr::Dnf(ts) => ts.iter().any(|t| term_holds(t.pos, t.neg, n, x)),
        Repr::MonotoneDnf(ts) => ts.iter().any(|&t| term_holds(t, 0, n, x)),
        Repr::SparsePoly(ms) => ms.iter().filter(|&&m| term_holds(m, 0, n, x)).count() % 2 == 1,
        Repr::Linear(s) => (0..n).filter(|&i| bit(*s, i) && bit(x, i)).count() % 2 == 1,
        Repr::DecisionList { rules, default } => {
            for r in rules {
                if bit(x, r.var) == r.xi {
                    return r.out;
                }
            }
            *default
        }
        Repr::RDecisionList { rules, default } => {
            for r in rules {
                if term_holds(r.term.pos, r.term.neg, n, x) == r.xi {
                    return r.out;
                }
            }
            *default
        }
        Repr::DecisionTree(nodes) => {
            let mut i = 0;
            loop {
                match nodes[i] {
                    TreeNode::Leaf(b) => return b,
                    TreeNode::Split { var, lo, hi } => i = if bit(x, var) { hi } else { lo },
                }
            }
        }
    }
}

pub fn table(f: &FunctionSpec) -> Vec<bool> {
    (0..1u64 << f.n()).map(|x| eval(f, x)).collect()
}

pub fn relevant(f: &FunctionSpec) -> Mask {
    let n = f.n();
    (0..n)
        .filter(|&i| (0..1u64 << n).any(|x| eval(f, x) != eval(f, x ^ 1 << i)))
        .fold(0, |m, i| m | 1 << i)
}

pub fn weight(d: &Distribution, n: usize, x: u64) -> f64 {
    match d {
        Distribution::Uniform => 1.0 / (1u64 << n) as f64,
        Distribution::ProductBias(p) => (0..n).map(|i| if bit(x, i) { p[i] } else { 1.0 - p[i] }).product(),
        Distribution::Explicit(e) => e
            .points()
            .iter()
            .zip(e.weights())
            .filter(|(p, _)| p.bits() == x)
            .map(|(_, w)| w)
            .sum(),
    }
}

pub fn distance(a: &FunctionSpec, b: &FunctionSpec, d: &Distribution) -> f64 {
    let n = a.n();
    (0..1u64 << n).filter(|&x| eval(a, x) != eval(b, x)).map(|x| weight(d, n, x)).sum()
}

/// Tables packed into a u64 (bit x = value at x), so n <= 6.
type Packed = u64;

fn pack(n: usize, g: impl Fn(u64) -> bool) -> Packed {
    (0..1u64 << n).filter(|&x| g(x)).fold(0 as Packed, |m, x| m | 1 << x)
}

/// All (pos, neg) literal sets with at most `k` literals; `monotone` forbids negations.
fn all_terms(n: usize, k: usize, monotone: bool) -> Vec<(Mask, Mask)> {
    let mut out = Vec::new();
    // Each variable: absent, positive or negative.
    let mut digits = vec![0u8; n];
    loop {
        let pos = (0..n).filter(|&i| digits[i] == 1).fold(0 as Mask, |m, i| m | 1 << i);
        let neg = (0..n).filter(|&i| digits[i] == 2).fold(0 as Mask, |m, i| m | 1 << i);
        let size = (pos | neg).count_ones() as usize;
        if size <= k && !(monotone && neg != 0) {
            out.push((pos, neg));
        }
        let mut i = 0;
        while i < n && digits[i] == 2 {
            digits[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
        digits[i] += 1;
    }
    out
}

/// Combine at most `s` items, OR or XOR, starting from `zero`.
fn combos(items: &[Packed], s: usize, xor: bool) -> BTreeSet<Packed> {
    let mut level: BTreeSet<Packed> = [0].into_iter().collect();
    let mut all = level.clone();
    for _ in 0..s {
        let mut next = BTreeSet::new();
        for &a in &level {
            for &b in items {
                next.insert(if xor { a ^ b } else { a | b });
            }
        }
        all.extend(next.iter().copied());
        level = next;
    }
    all
}

fn members(cls: &ClassSpec, n: usize) -> Option<BTreeSet<Packed>> {
    if n > 4 {
        return None;
    }
    let cube = 1u64 << n;
    let full: Packed = if cube == 64 { u64::MAX } else { (1 << cube) - 1 };
    let term_table = |pos: Mask, neg: Mask| pack(n, |x| term_holds(pos, neg, n, x));
    let relevant_count = |t: Packed| {
        (0..n)
            .filter(|&i| (0..cube).any(|x| bit(t, x as usize) != bit(t, (x ^ 1 << i) as usize)))
            .count()
    };
    let set: BTreeSet<Packed> = match *cls {
        ClassSpec::Junta { k } => (0..=full).filter(|&t| relevant_count(t) <= k).collect(),
        ClassSpec::Linear { k } => (0..1u64 << n)
            .filter(|s| s.count_ones() as usize <= k)
            .map(|s| pack(n, |x| (x & s).count_ones() % 2 == 1))
            .collect(),
        ClassSpec::Term { k } => {
            let mut v: BTreeSet<Packed> = all_terms(n, k, false).into_iter().map(|(p, q)| term_table(p, q)).collect();
            v.insert(0);
            v
        }
        ClassSpec::MonotoneDnf { s, r } => {
            let items: Vec<Packed> = all_terms(n, r, true).into_iter().map(|(p, q)| term_table(p, q)).collect();
            combos(&items, s, false)
        }
        ClassSpec::UnateDnf { s, r } => {
            let mut out = BTreeSet::new();
            for flip in 0..1u64 << n {
                let items: Vec<Packed> = all_terms(n, r, true)
                    .into_iter()
                    .map(|(p, _)| term_table(p & !flip, p & flip))
                    .collect();
                out.extend(combos(&items, s, false));
            }
            out
        }
        ClassSpec::Dnf { s, term_cap } => {
            let items: Vec<Packed> =
                all_terms(n, term_cap.unwrap_or(n), false).into_iter().map(|(p, q)| term_table(p, q)).collect();
            combos(&items, s, false)
        }
        ClassSpec::SparsePoly { s, d } => {
            let items: Vec<Packed> = all_terms(n, d, true).into_iter().map(|(p, q)| term_table(p, q)).collect();
            combos(&items, s, true)
        }
        ClassSpec::DecisionList { len } => lists(n, len, &all_terms(n, 1, false).into_iter().filter(|(p, q)| p | q != 0).collect::<Vec<_>>()),
        ClassSpec::RDecisionList { r, len } => lists(n, len, &all_terms(n, r, false)),
        ClassSpec::DecisionTree { size } => trees(n, size),
    };
    Some(set)
}

/// Tables of lists of at most `len` rules, each firing on one of `terms` or its negation,
/// with either default.
fn lists(n: usize, len: usize, terms: &[(Mask, Mask)]) -> BTreeSet<Packed> {
    let cube = 1u64 << n;
    let mut out = BTreeSet::new();
    // State: (table so far on decided points, decided mask).
    let mut level: BTreeSet<(Packed, Packed)> = [(0, 0)].into_iter().collect();
    let conds: Vec<Packed> = {
        let mut c: Vec<Packed> = terms.iter().map(|&(p, q)| pack(n, |x| term_holds(p, q, n, x))).collect();
        let full: Packed = if cube == 64 { u64::MAX } else { (1 << cube) - 1 };
        let negs: Vec<Packed> = c.iter().map(|t| !t & full).collect();
        c.extend(negs);
        c
    };
    let full: Packed = if cube == 64 { u64::MAX } else { (1 << cube) - 1 };
    for step in 0..=len {
        for &(vals, decided) in &level {
            for default in [false, true] {
                out.insert(if default { vals | (!decided & full) } else { vals });
            }
        }
        if step == len {
            break;
        }
        let mut next = BTreeSet::new();
        for &(vals, decided) in &level {
            for &c in &conds {
                let fresh = c & !decided;
                for o in [false, true] {
                    next.insert((if o { vals | fresh } else { vals }, decided | fresh));
                }
            }
        }
        level = next;
    }
    out
}

fn trees(n: usize, size: usize) -> BTreeSet<Packed> {
    let cube = 1u64 << n;
    let full: Packed = if cube == 64 { u64::MAX } else { (1 << cube) - 1 };
    // by_leaves[m]: tables of trees with at most m leaves.
    let mut by_leaves: Vec<BTreeSet<Packed>> = vec![BTreeSet::new(), [0, full].into_iter().collect()];
    for m in 2..=size.max(1) {
        let mut cur = by_leaves[m - 1].clone();
        for left in 1..m {
            for &a in &by_leaves[left] {
                for &b in &by_leaves[m - left] {
                    for v in 0..n {
                        let xv = pack(n, |x| bit(x, v));
                        cur.insert((a & !xv) | (b & xv));
                    }
                }
            }
        }
        by_leaves.push(cur);
    }
    by_leaves[size.max(1)].clone()
}

pub fn distance_to_class(f: &FunctionSpec, cls: &ClassSpec, d: &Distribution) -> Option<f64> {
    let n = f.n();
    let target = pack(n, |x| eval(f, x));
    let set = members(cls, n)?;
    set.iter()
        .map(|&g| (0..1u64 << n).filter(|&x| bit(g ^ target, x as usize)).map(|x| weight(d, n, x)).sum::<f64>())
        .min_by(|a, b| a.total_cmp(b))
}
