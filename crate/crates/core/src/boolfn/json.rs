//! JSON file format for functions and distributions.
//!
//! ```json
//! {"n": 4, "class": "dnf", "body": [[1, -2], [3]]}
//! ```
//!
//! Variables are 1-based here; `-i` negates `x_i`.

use serde_json::{json, Value};

use super::dist::Distribution;
use super::point::Point;
use super::spec::{DlRule, FunctionSpec, RdlRule, Repr, Term, TreeNode};
use super::table::TruthTable;
use super::BoolFnError;

fn bad(msg: impl Into<String>) -> BoolFnError {
    BoolFnError::Parse(msg.into())
}

fn as_int(v: &Value) -> Result<i64, BoolFnError> {
    v.as_i64().ok_or_else(|| bad(format!("expected an integer, got {v}")))
}

fn as_bit(v: &Value) -> Result<bool, BoolFnError> {
    match v {
        Value::Bool(b) => Ok(*b),
        Value::Number(_) => match as_int(v)? {
            0 => Ok(false),
            1 => Ok(true),
            x => Err(bad(format!("expected a bit, got {x}"))),
        },
        _ => Err(bad(format!("expected a bit, got {v}"))),
    }
}

fn as_array(v: &Value) -> Result<&Vec<Value>, BoolFnError> {
    v.as_array().ok_or_else(|| bad(format!("expected an array, got {v}")))
}

fn int_list(v: &Value) -> Result<Vec<i64>, BoolFnError> {
    as_array(v)?.iter().map(as_int).collect()
}

fn var_mask(vars: &[i64], n: usize) -> Result<u64, BoolFnError> {
    let mut m = 0u64;
    for &v in vars {
        if v < 1 || v as usize > n {
            return Err(BoolFnError::VarOutOfRange { var: v, n });
        }
        m |= 1 << (v - 1);
    }
    Ok(m)
}

fn var_index(v: &Value, n: usize) -> Result<usize, BoolFnError> {
    let i = as_int(v)?;
    if i < 1 || i as usize > n {
        return Err(BoolFnError::VarOutOfRange { var: i, n });
    }
    Ok(i as usize - 1)
}

/// Parse a function file.
pub fn parse_function(text: &str) -> Result<FunctionSpec, BoolFnError> {
    let v: Value = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
    function_from_value(&v)
}

pub fn function_from_value(v: &Value) -> Result<FunctionSpec, BoolFnError> {
    let n = v
        .get("n")
        .and_then(Value::as_u64)
        .ok_or_else(|| bad("missing \"n\""))? as usize;
    if n > 64 {
        return Err(BoolFnError::TooLarge { n, max: 64 });
    }
    let class = v
        .get("class")
        .and_then(Value::as_str)
        .ok_or_else(|| bad("missing \"class\""))?;
    let body = v.get("body").ok_or_else(|| bad("missing \"body\""))?;
    match class {
        "dnf" => {
            let terms = as_array(body)?.iter().map(int_list).collect::<Result<Vec<_>, _>>()?;
            FunctionSpec::dnf_from_literals(n, &terms)
        }
        "monotone_dnf" => {
            let mut terms = Vec::new();
            for t in as_array(body)? {
                let lits = int_list(t)?;
                if lits.iter().any(|&l| l < 0) {
                    return Err(bad("negated literal in a monotone DNF"));
                }
                // Reuse the literal checks for duplicates and range.
                terms.push(Term::from_literals(&lits, n)?.pos);
            }
            FunctionSpec::monotone_dnf(n, terms)
        }
        "poly_f2" => {
            let mut monos = Vec::new();
            for m in as_array(body)? {
                let vars = int_list(m)?;
                monos.push(Term::from_literals(&vars, n)?.pos);
                if vars.iter().any(|&x| x < 0) {
                    return Err(bad("negated variable in a monomial"));
                }
            }
            FunctionSpec::sparse_poly(n, monos)
        }
        "linear" => FunctionSpec::linear(n, var_mask(&int_list(body)?, n)?),
        "decision_list" => {
            let rules = as_array(body.get("rules").ok_or_else(|| bad("missing \"rules\""))?)?
                .iter()
                .map(|r| {
                    let r = as_array(r)?;
                    if r.len() != 3 {
                        return Err(bad("a rule is [var, xi, out]"));
                    }
                    Ok(DlRule { var: var_index(&r[0], n)?, xi: as_bit(&r[1])?, out: as_bit(&r[2])? })
                })
                .collect::<Result<Vec<_>, _>>()?;
            let default = body.get("default").map(as_bit).transpose()?.unwrap_or(false);
            FunctionSpec::decision_list(n, rules, default)
        }
        "r_decision_list" => {
            let rules = as_array(body.get("rules").ok_or_else(|| bad("missing \"rules\""))?)?
                .iter()
                .map(|r| {
                    let r = as_array(r)?;
                    if r.len() != 3 {
                        return Err(bad("a rule is [[literals], xi, out]"));
                    }
                    let term = Term::from_literals(&int_list(&r[0])?, n)?;
                    Ok(RdlRule { term, xi: as_bit(&r[1])?, out: as_bit(&r[2])? })
                })
                .collect::<Result<Vec<_>, _>>()?;
            let default = body.get("default").map(as_bit).transpose()?.unwrap_or(false);
            FunctionSpec::r_decision_list(n, rules, default)
        }
        "decision_tree" => {
            let nodes = as_array(body.get("nodes").ok_or_else(|| bad("missing \"nodes\""))?)?
                .iter()
                .map(|nd| {
                    if let Some(b) = nd.get("leaf") {
                        return Ok(TreeNode::Leaf(as_bit(b)?));
                    }
                    let field = |k: &str| nd.get(k).ok_or_else(|| bad(format!("node lacks \"{k}\"")));
                    Ok(TreeNode::Split {
                        var: var_index(field("var")?, n)?,
                        lo: as_int(field("lo")?)? as usize,
                        hi: as_int(field("hi")?)? as usize,
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            FunctionSpec::decision_tree(n, nodes)
        }
        "truth_table" => {
            let hex = body.as_str().ok_or_else(|| bad("truth table body is a hex string"))?;
            Ok(FunctionSpec::truth_table(TruthTable::from_hex(n, hex)?))
        }
        other => Err(bad(format!("unknown class {other:?}"))),
    }
}

fn vars_of(m: u64) -> Vec<i64> {
    super::point::mask_indices(m).map(|i| i as i64 + 1).collect()
}

/// Serialize back to the file format.
pub fn function_to_value(f: &FunctionSpec) -> Value {
    let n = f.n();
    let (class, body) = match f.repr() {
        Repr::TruthTable(t) => ("truth_table", json!(t.to_hex())),
        Repr::Dnf(ts) => ("dnf", json!(ts.iter().map(|t| t.literals()).collect::<Vec<_>>())),
        Repr::MonotoneDnf(ts) => ("monotone_dnf", json!(ts.iter().map(|&t| vars_of(t)).collect::<Vec<_>>())),
        Repr::SparsePoly(ms) => ("poly_f2", json!(ms.iter().map(|&m| vars_of(m)).collect::<Vec<_>>())),
        Repr::Linear(s) => ("linear", json!(vars_of(*s))),
        Repr::DecisionList { rules, default } => (
            "decision_list",
            json!({
                "rules": rules.iter().map(|r| json!([r.var + 1, r.xi as u8, r.out as u8])).collect::<Vec<_>>(),
                "default": *default as u8,
            }),
        ),
        Repr::RDecisionList { rules, default } => (
            "r_decision_list",
            json!({
                "rules": rules.iter().map(|r| json!([r.term.literals(), r.xi as u8, r.out as u8])).collect::<Vec<_>>(),
                "default": *default as u8,
            }),
        ),
        Repr::DecisionTree(nodes) => (
            "decision_tree",
            json!({
                "nodes": nodes.iter().map(|nd| match *nd {
                    TreeNode::Leaf(b) => json!({"leaf": b as u8}),
                    TreeNode::Split { var, lo, hi } => json!({"var": var + 1, "lo": lo, "hi": hi}),
                }).collect::<Vec<_>>(),
            }),
        ),
    };
    json!({"n": n, "class": class, "body": body})
}

/// Parse a distribution file:
/// `{"kind": "uniform"}`, `{"kind": "explicit", "support": [["0110", 0.5], ...]}`
/// or `{"kind": "product", "p": [0.5, ...]}`.
pub fn parse_distribution(text: &str) -> Result<Distribution, BoolFnError> {
    let v: Value = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
    match v.get("kind").and_then(Value::as_str) {
        Some("uniform") => Ok(Distribution::Uniform),
        Some("explicit") => {
            let support = as_array(v.get("support").ok_or_else(|| bad("missing \"support\""))?)?
                .iter()
                .map(|e| {
                    let e = as_array(e)?;
                    let p: Point = e
                        .first()
                        .and_then(Value::as_str)
                        .ok_or_else(|| bad("support entry is [point, weight]"))?
                        .parse()?;
                    let w = e.get(1).and_then(Value::as_f64).ok_or_else(|| bad("missing weight"))?;
                    Ok((p, w))
                })
                .collect::<Result<Vec<_>, BoolFnError>>()?;
            Distribution::explicit(support)
        }
        Some("product") => {
            let p = as_array(v.get("p").ok_or_else(|| bad("missing \"p\""))?)?
                .iter()
                .map(|x| x.as_f64().ok_or_else(|| bad("bias must be a number")))
                .collect::<Result<Vec<_>, _>>()?;
            Distribution::product(p)
        }
        _ => Err(bad("distribution needs \"kind\": uniform | explicit | product")),
    }
}

pub fn distribution_to_value(d: &Distribution) -> Value {
    match d {
        Distribution::Uniform => json!({"kind": "uniform"}),
        Distribution::Explicit(e) => json!({
            "kind": "explicit",
            "support": e.points().iter().zip(e.weights()).map(|(p, w)| json!([p.to_string(), w])).collect::<Vec<_>>(),
        }),
        Distribution::ProductBias(p) => json!({"kind": "product", "p": p}),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_every_class() {
        let files = [
            r#"{"n":3,"class":"dnf","body":[[1,-2],[3]]}"#,
            r#"{"n":3,"class":"monotone_dnf","body":[[1,2],[3]]}"#,
            r#"{"n":3,"class":"poly_f2","body":[[1],[2,3],[]]}"#,
            r#"{"n":3,"class":"linear","body":[1,3]}"#,
            r#"{"n":2,"class":"decision_list","body":{"rules":[[2,1,1],[1,0,0]],"default":1}}"#,
            r#"{"n":3,"class":"r_decision_list","body":{"rules":[[[1,-3],1,1]],"default":0}}"#,
            r#"{"n":2,"class":"decision_tree","body":{"nodes":[{"var":1,"lo":1,"hi":2},{"leaf":0},{"leaf":1}]}}"#,
            r#"{"n":3,"class":"truth_table","body":"82"}"#,
        ];
        for text in files {
            let f = parse_function(text).unwrap();
            let back = function_from_value(&function_to_value(&f)).unwrap();
            assert_eq!(f, back, "{text}");
        }
    }

    #[test]
    fn rejects_out_of_range_and_contradictions() {
        assert!(parse_function(r#"{"n":2,"class":"dnf","body":[[3]]}"#).is_err());
        assert!(parse_function(r#"{"n":2,"class":"dnf","body":[[1,-1]]}"#).is_err());
        assert!(parse_function(r#"{"n":2,"class":"blob","body":[]}"#).is_err());
    }
}
