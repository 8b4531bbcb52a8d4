use super::point::{full_mask, mask_indices, Mask, Point};
use super::table::TruthTable;
use super::BoolFnError;

/// A conjunction of literals: every variable in `pos` must be 1, every variable in `neg` 0.
///
/// The empty term is the constant 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Term {
    pub pos: Mask,
    pub neg: Mask,
}

impl Term {
    pub fn new(pos: Mask, neg: Mask) -> Result<Self, BoolFnError> {
        if pos & neg != 0 {
            return Err(BoolFnError::Contradictory(pos & neg));
        }
        Ok(Term { pos, neg })
    }

    pub fn positive(pos: Mask) -> Self {
        Term { pos, neg: 0 }
    }

    /// Build from signed 1-based literals (`+i` for `x_i`, `-i` for its negation).
    pub fn from_literals(lits: &[i64], n: usize) -> Result<Self, BoolFnError> {
        let (mut pos, mut neg) = (0u64, 0u64);
        for &l in lits {
            let v = l.unsigned_abs() as usize;
            if l == 0 || v > n {
                return Err(BoolFnError::VarOutOfRange { var: l, n });
            }
            let bit = 1u64 << (v - 1);
            if (pos | neg) & bit != 0 {
                if (l > 0 && neg & bit != 0) || (l < 0 && pos & bit != 0) {
                    return Err(BoolFnError::Contradictory(bit));
                }
                return Err(BoolFnError::DuplicateLiteral(v));
            }
            if l > 0 {
                pos |= bit;
            } else {
                neg |= bit;
            }
        }
        Ok(Term { pos, neg })
    }

    /// Signed 1-based literals sorted by variable.
    pub fn literals(&self) -> Vec<i64> {
        mask_indices(self.vars())
            .map(|i| {
                let v = i as i64 + 1;
                if self.pos >> i & 1 == 1 {
                    v
                } else {
                    -v
                }
            })
            .collect()
    }

    #[inline]
    pub fn eval(&self, x: u64) -> bool {
        x & self.pos == self.pos && x & self.neg == 0
    }

    pub fn vars(&self) -> Mask {
        self.pos | self.neg
    }

    pub fn size(&self) -> usize {
        self.vars().count_ones() as usize
    }
}

/// One node of a decision tree; node 0 is the root.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TreeNode {
    Leaf(bool),
    /// Test 0-based variable `var`: go to `lo` when it is 0, `hi` when it is 1.
    Split { var: usize, lo: usize, hi: usize },
}

/// Rule of a decision list: if `x_var == xi` output `out`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DlRule {
    pub var: usize,
    pub xi: bool,
    pub out: bool,
}

/// Rule of an r-decision list: if `term(x) == xi` output `out`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RdlRule {
    pub term: Term,
    pub xi: bool,
    pub out: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Repr {
    TruthTable(TruthTable),
    Dnf(Vec<Term>),
    MonotoneDnf(Vec<Mask>),
    /// XOR of monotone monomials; the empty monomial is the constant 1.
    SparsePoly(Vec<Mask>),
    Linear(Mask),
    DecisionList { rules: Vec<DlRule>, default: bool },
    RDecisionList { rules: Vec<RdlRule>, default: bool },
    DecisionTree(Vec<TreeNode>),
}

/// A concrete Boolean function over `{0,1}^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionSpec {
    n: usize,
    repr: Repr,
}

fn check_mask(m: Mask, n: usize) -> Result<(), BoolFnError> {
    if m & !full_mask(n) != 0 {
        let var = 64 - m.leading_zeros() as i64;
        return Err(BoolFnError::VarOutOfRange { var, n });
    }
    Ok(())
}

fn check_n(n: usize) -> Result<(), BoolFnError> {
    if n > 64 {
        return Err(BoolFnError::TooLarge { n, max: 64 });
    }
    Ok(())
}

impl FunctionSpec {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn repr(&self) -> &Repr {
        &self.repr
    }

    pub fn constant(n: usize, b: bool) -> Self {
        if b {
            FunctionSpec { n, repr: Repr::SparsePoly(vec![0]) }
        } else {
            FunctionSpec { n, repr: Repr::SparsePoly(vec![]) }
        }
    }

    pub fn dnf(n: usize, terms: Vec<Term>) -> Result<Self, BoolFnError> {
        check_n(n)?;
        for t in &terms {
            check_mask(t.vars(), n)?;
            if t.pos & t.neg != 0 {
                return Err(BoolFnError::Contradictory(t.pos & t.neg));
            }
        }
        Ok(FunctionSpec { n, repr: Repr::Dnf(terms) })
    }

    /// DNF from signed 1-based literal lists.
    pub fn dnf_from_literals(n: usize, terms: &[Vec<i64>]) -> Result<Self, BoolFnError> {
        let ts = terms
            .iter()
            .map(|t| Term::from_literals(t, n))
            .collect::<Result<Vec<_>, _>>()?;
        FunctionSpec::dnf(n, ts)
    }

    pub fn monotone_dnf(n: usize, terms: Vec<Mask>) -> Result<Self, BoolFnError> {
        check_n(n)?;
        for &t in &terms {
            check_mask(t, n)?;
        }
        Ok(FunctionSpec { n, repr: Repr::MonotoneDnf(terms) })
    }

    /// XOR of monomials; repeated monomials cancel in pairs and the result is sorted.
    pub fn sparse_poly(n: usize, monomials: Vec<Mask>) -> Result<Self, BoolFnError> {
        check_n(n)?;
        for &m in &monomials {
            check_mask(m, n)?;
        }
        Ok(FunctionSpec { n, repr: Repr::SparsePoly(cancel_monomials(monomials)) })
    }

    pub fn linear(n: usize, support: Mask) -> Result<Self, BoolFnError> {
        check_n(n)?;
        check_mask(support, n)?;
        Ok(FunctionSpec { n, repr: Repr::Linear(support) })
    }

    pub fn decision_list(n: usize, rules: Vec<DlRule>, default: bool) -> Result<Self, BoolFnError> {
        check_n(n)?;
        for r in &rules {
            if r.var >= n {
                return Err(BoolFnError::VarOutOfRange { var: r.var as i64 + 1, n });
            }
        }
        Ok(FunctionSpec { n, repr: Repr::DecisionList { rules, default } })
    }

    pub fn r_decision_list(n: usize, rules: Vec<RdlRule>, default: bool) -> Result<Self, BoolFnError> {
        check_n(n)?;
        for r in &rules {
            check_mask(r.term.vars(), n)?;
        }
        Ok(FunctionSpec { n, repr: Repr::RDecisionList { rules, default } })
    }

    /// Children must have larger indices than their parent, which rules out cycles.
    pub fn decision_tree(n: usize, nodes: Vec<TreeNode>) -> Result<Self, BoolFnError> {
        check_n(n)?;
        if nodes.is_empty() {
            return Err(BoolFnError::Malformed("decision tree has no nodes".into()));
        }
        for (i, node) in nodes.iter().enumerate() {
            if let TreeNode::Split { var, lo, hi } = *node {
                if var >= n {
                    return Err(BoolFnError::VarOutOfRange { var: var as i64 + 1, n });
                }
                if lo <= i || hi <= i || lo >= nodes.len() || hi >= nodes.len() {
                    return Err(BoolFnError::Malformed(format!("node {i} has a bad child index")));
                }
            }
        }
        Ok(FunctionSpec { n, repr: Repr::DecisionTree(nodes) })
    }

    pub fn truth_table(table: TruthTable) -> Self {
        FunctionSpec { n: table.n(), repr: Repr::TruthTable(table) }
    }

    /// Evaluate on the packed bits of a point of this dimension.
    #[inline]
    pub fn eval_bits(&self, x: u64) -> bool {
        match &self.repr {
            Repr::TruthTable(t) => t.get(x as usize),
            Repr::Dnf(ts) => ts.iter().any(|t| t.eval(x)),
            Repr::MonotoneDnf(ts) => ts.iter().any(|&t| x & t == t),
            Repr::SparsePoly(ms) => ms.iter().filter(|&&m| x & m == m).count() & 1 == 1,
            Repr::Linear(s) => (x & s).count_ones() & 1 == 1,
            Repr::DecisionList { rules, default } => {
                for r in rules {
                    if (x >> r.var & 1 == 1) == r.xi {
                        return r.out;
                    }
                }
                *default
            }
            Repr::RDecisionList { rules, default } => {
                for r in rules {
                    if r.term.eval(x) == r.xi {
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
                        TreeNode::Split { var, lo, hi } => {
                            i = if x >> var & 1 == 1 { hi } else { lo };
                        }
                    }
                }
            }
        }
    }

    /// Value at `x`; panics when the dimensions differ.
    pub fn evaluate(&self, x: Point) -> bool {
        assert_eq!(x.n(), self.n, "point dimension does not match the function");
        self.eval_bits(x.bits())
    }

    pub fn try_evaluate(&self, x: Point) -> Result<bool, BoolFnError> {
        if x.n() != self.n {
            return Err(BoolFnError::DimensionMismatch { expected: self.n, got: x.n() });
        }
        Ok(self.eval_bits(x.bits()))
    }

    /// Variables mentioned by the representation. A superset of the relevant ones.
    pub fn mentioned_vars(&self) -> Mask {
        match &self.repr {
            Repr::TruthTable(_) => full_mask(self.n),
            Repr::Dnf(ts) => ts.iter().fold(0, |a, t| a | t.vars()),
            Repr::MonotoneDnf(ts) | Repr::SparsePoly(ts) => ts.iter().fold(0, |a, t| a | t),
            Repr::Linear(s) => *s,
            Repr::DecisionList { rules, .. } => rules.iter().fold(0, |a, r| a | 1 << r.var),
            Repr::RDecisionList { rules, .. } => rules.iter().fold(0, |a, r| a | r.term.vars()),
            Repr::DecisionTree(nodes) => nodes.iter().fold(0, |a, nd| match nd {
                TreeNode::Split { var, .. } => a | 1 << var,
                TreeNode::Leaf(_) => a,
            }),
        }
    }

    /// Number of terms for DNFs, monomials for polynomials.
    pub fn term_count(&self) -> Option<usize> {
        match &self.repr {
            Repr::Dnf(ts) => Some(ts.len()),
            Repr::MonotoneDnf(ts) | Repr::SparsePoly(ts) => Some(ts.len()),
            _ => None,
        }
    }

    /// Largest term size (or polynomial degree).
    pub fn max_term_size(&self) -> Option<usize> {
        match &self.repr {
            Repr::Dnf(ts) => Some(ts.iter().map(|t| t.size()).max().unwrap_or(0)),
            Repr::MonotoneDnf(ts) | Repr::SparsePoly(ts) => {
                Some(ts.iter().map(|t| t.count_ones() as usize).max().unwrap_or(0))
            }
            _ => None,
        }
    }

    /// The same function with inputs `x` replaced by `x XOR flip`.
    pub fn flip_inputs(&self, flip: Mask) -> Result<FunctionSpec, BoolFnError> {
        let n = self.n;
        let f = flip & full_mask(n);
        match &self.repr {
            Repr::Dnf(ts) => {
                let ts = ts
                    .iter()
                    .map(|t| Term { pos: (t.pos & !f) | (t.neg & f), neg: (t.neg & !f) | (t.pos & f) })
                    .collect();
                FunctionSpec::dnf(n, ts)
            }
            Repr::MonotoneDnf(ts) => {
                let ts = ts.iter().map(|&t| Term { pos: t & !f, neg: t & f }).collect();
                FunctionSpec::dnf(n, ts)
            }
            _ => Err(BoolFnError::Unsupported("input flip on this representation".into())),
        }
    }
}

/// Cancel repeated monomials mod 2 and sort.
pub fn cancel_monomials(mut ms: Vec<Mask>) -> Vec<Mask> {
    ms.sort_unstable();
    let mut out: Vec<Mask> = Vec::with_capacity(ms.len());
    for m in ms {
        if out.last() == Some(&m) {
            out.pop();
        } else {
            out.push(m);
        }
    }
    out
}
