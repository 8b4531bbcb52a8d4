//! Random class members and certified far instances.

use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use crate::boolfn::{
    mask_indices, relevant_variables, ClassSpec, Distribution, DlRule, FunctionSpec, Mask, RdlRule, Term, TreeNode,
};

use super::{classify_instance, Classification, HarnessError};

/// Attempts before far-instance generation gives up.
pub const MAX_GEN_ATTEMPTS: usize = 100;

/// Largest variable count of a far candidate. Keeps certification cheap.
pub const MAX_FAR_VARS: usize = 7;

/// Term size used for DNF members when the class sets no cap.
pub const DNF_MEMBER_TERM_SIZE: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Want {
    Member,
    /// Certified at distance at least the run's epsilon.
    Far,
}

fn pick_vars(n: usize, j: usize, rng: &mut dyn RngCore) -> Vec<usize> {
    let mut v = sample(rng, n, j.min(n)).into_vec();
    v.sort_unstable();
    v
}

fn to_mask(vars: &[usize]) -> Mask {
    vars.iter().fold(0, |m, &v| m | 1 << v)
}

fn size_in(lo: usize, hi: usize, rng: &mut dyn RngCore) -> usize {
    if hi <= lo {
        lo
    } else {
        rng.gen_range(lo..=hi)
    }
}

fn random_term(n: usize, size: usize, monotone: bool, rng: &mut dyn RngCore) -> Term {
    let vars = to_mask(&pick_vars(n, size, rng));
    let neg = if monotone { 0 } else { vars & rng.next_u64() };
    Term { pos: vars & !neg, neg }
}

/// Complete decision tree over `vars` whose leaf for assignment `j` (bit `b` of `j` is the
/// value of `vars[b]`) is `values[j]`.
pub fn table_tree(n: usize, vars: &[usize], values: &[bool]) -> FunctionSpec {
    assert_eq!(values.len(), 1 << vars.len());
    fn build(vars: &[usize], values: &[bool], depth: usize, j: usize, out: &mut Vec<TreeNode>) -> usize {
        let me = out.len();
        if depth == vars.len() {
            out.push(TreeNode::Leaf(values[j]));
            return me;
        }
        out.push(TreeNode::Leaf(false));
        let lo = build(vars, values, depth + 1, j, out);
        let hi = build(vars, values, depth + 1, j | 1 << depth, out);
        out[me] = TreeNode::Split { var: vars[depth], lo, hi };
        me
    }
    let mut nodes = Vec::with_capacity(2 << vars.len());
    build(vars, values, 0, 0, &mut nodes);
    FunctionSpec::decision_tree(n, nodes).expect("variables are in range")
}

fn random_tree(n: usize, leaves: usize, rng: &mut dyn RngCore) -> FunctionSpec {
    // Grow by splitting a random leaf on a variable not yet tested on its path.
    #[derive(Clone)]
    enum Node {
        Leaf(bool, Mask),
        Split(usize, usize, usize),
    }
    let mut nodes = vec![Node::Leaf(rng.gen(), 0)];
    let mut grown = 1;
    while grown < leaves {
        let open: Vec<usize> = nodes
            .iter()
            .enumerate()
            .filter(|(_, nd)| matches!(nd, Node::Leaf(_, used) if used.count_ones() < n as u32))
            .map(|(i, _)| i)
            .collect();
        if open.is_empty() {
            break;
        }
        let i = open[rng.gen_range(0..open.len())];
        let Node::Leaf(_, used) = nodes[i] else { unreachable!() };
        let choices: Vec<usize> = (0..n).filter(|v| used >> v & 1 == 0).collect();
        let var = choices[rng.gen_range(0..choices.len())];
        let used = used | 1 << var;
        let lo = nodes.len();
        nodes.push(Node::Leaf(rng.gen(), used));
        nodes.push(Node::Leaf(rng.gen(), used));
        nodes[i] = Node::Split(var, lo, lo + 1);
        grown += 1;
    }
    // Renumber in preorder so children follow parents.
    fn emit(nodes: &[Node], i: usize, out: &mut Vec<TreeNode>) -> usize {
        let me = out.len();
        match nodes[i] {
            Node::Leaf(b, _) => out.push(TreeNode::Leaf(b)),
            Node::Split(var, lo, hi) => {
                out.push(TreeNode::Leaf(false));
                let l = emit(nodes, lo, out);
                let h = emit(nodes, hi, out);
                out[me] = TreeNode::Split { var, lo: l, hi: h };
            }
        }
        me
    }
    let mut out = Vec::new();
    emit(&nodes, 0, &mut out);
    FunctionSpec::decision_tree(n, out).expect("variables are in range")
}

/// A random syntactic member of `cls` over `n` variables.
pub fn random_member(cls: &ClassSpec, n: usize, rng: &mut dyn RngCore) -> Result<FunctionSpec, HarnessError> {
    let bad = |m: &str| HarnessError::Config(format!("{}: {m}", cls.name()));
    if n == 0 {
        return Err(bad("n must be at least 1"));
    }
    let f = match *cls {
        ClassSpec::Junta { k } => {
            let vars = pick_vars(n, k.min(n), rng);
            let values: Vec<bool> = (0..1usize << vars.len()).map(|_| rng.gen()).collect();
            table_tree(n, &vars, &values)
        }
        ClassSpec::Linear { k } => {
            let j = size_in(1, k.min(n), rng);
            FunctionSpec::linear(n, to_mask(&pick_vars(n, j, rng)))?
        }
        ClassSpec::Term { k } => {
            let j = size_in(1, k.min(n), rng);
            FunctionSpec::dnf(n, vec![random_term(n, j, false, rng)])?
        }
        ClassSpec::MonotoneDnf { s, r } | ClassSpec::UnateDnf { s, r } => {
            let terms: Vec<Mask> = (0..s).map(|_| to_mask(&pick_vars(n, size_in(1, r.min(n), rng), rng))).collect();
            let f = FunctionSpec::monotone_dnf(n, terms)?;
            if matches!(cls, ClassSpec::UnateDnf { .. }) {
                f.flip_inputs(rng.next_u64())?
            } else {
                f
            }
        }
        ClassSpec::Dnf { s, term_cap } => {
            let cap = term_cap.unwrap_or(DNF_MEMBER_TERM_SIZE).min(n);
            let terms = (0..s).map(|_| random_term(n, size_in(1, cap, rng), false, rng)).collect();
            FunctionSpec::dnf(n, terms)?
        }
        ClassSpec::SparsePoly { s, d } => {
            let monos = (0..s).map(|_| to_mask(&pick_vars(n, size_in(1, d.min(n), rng), rng))).collect();
            FunctionSpec::sparse_poly(n, monos)?
        }
        ClassSpec::DecisionList { len } => {
            let mut rules: Vec<DlRule> = pick_vars(n, len.min(n), rng)
                .into_iter()
                .map(|var| DlRule { var, xi: rng.gen(), out: rng.gen() })
                .collect();
            rules.shuffle(rng);
            FunctionSpec::decision_list(n, rules, rng.gen())?
        }
        ClassSpec::RDecisionList { r, len } => {
            let rules = (0..len)
                .map(|_| RdlRule { term: random_term(n, size_in(1, r.min(n), rng), false, rng), xi: true, out: rng.gen() })
                .collect();
            FunctionSpec::r_decision_list(n, rules, rng.gen())?
        }
        ClassSpec::DecisionTree { size } => random_tree(n, size.max(1), rng),
    };
    Ok(f)
}

/// One far candidate. Families rotate with the attempt index: a parity, a random function
/// on a few variables, and a member whose table over its relevant variables (plus up to two
/// more) has a random fraction in `[epsilon, 1/2]` of its entries flipped.
fn far_candidate(
    cls: &ClassSpec,
    n: usize,
    epsilon: f64,
    attempt: usize,
    rng: &mut dyn RngCore,
) -> Result<FunctionSpec, HarnessError> {
    let top = MAX_FAR_VARS.min(n);
    Ok(match attempt % 3 {
        0 => FunctionSpec::linear(n, to_mask(&pick_vars(n, size_in(2.min(top), top, rng), rng)))?,
        1 => {
            let vars = pick_vars(n, size_in(2.min(top), top, rng), rng);
            let values: Vec<bool> = (0..1usize << vars.len()).map(|_| rng.gen()).collect();
            table_tree(n, &vars, &values)
        }
        _ => {
            let g = random_member(cls, n, rng)?;
            let rel = if n <= crate::boolfn::MAX_TABLE_N { relevant_variables(&g)? } else { g.mentioned_vars() };
            let mut vars: Vec<usize> = mask_indices(rel).collect();
            let extra: Vec<usize> = (0..n).filter(|v| rel >> v & 1 == 0).collect();
            for _ in 0..2 {
                if vars.len() < top && !extra.is_empty() {
                    let v = extra[rng.gen_range(0..extra.len())];
                    if !vars.contains(&v) {
                        vars.push(v);
                    }
                }
            }
            vars.shuffle(rng);
            vars.truncate(top);
            let rho = rng.gen_range(epsilon.min(0.5)..=0.5);
            let values: Vec<bool> = (0..1usize << vars.len())
                .map(|j| {
                    let bits = vars.iter().enumerate().filter(|(b, _)| j >> b & 1 == 1).fold(0u64, |m, (_, &v)| m | 1 << v);
                    g.eval_bits(bits) ^ (rng.gen::<f64>() < rho)
                })
                .collect();
            table_tree(n, &vars, &values)
        }
    })
}

/// A member of `cls`, or an instance certified `epsilon`-far from it under `dist`.
pub fn generate_instance(
    cls: &ClassSpec,
    n: usize,
    want: Want,
    epsilon: f64,
    dist: &Distribution,
    rng: &mut dyn RngCore,
) -> Result<FunctionSpec, HarnessError> {
    match want {
        Want::Member => random_member(cls, n, rng),
        Want::Far => {
            for attempt in 0..MAX_GEN_ATTEMPTS {
                let f = far_candidate(cls, n, epsilon, attempt, rng)?;
                if let Classification::EpsFar { .. } = classify_instance(&f, cls, epsilon, dist) {
                    return Ok(f);
                }
            }
            Err(HarnessError::Generation { class: cls.name().into(), attempts: MAX_GEN_ATTEMPTS })
        }
    }
}
