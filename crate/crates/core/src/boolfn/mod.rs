//! Boolean functions on `{0,1}^n`: representations, evaluation, distributions and
//! brute-force ground truth (distance, relevant variables, distance to a class).

mod class;
mod dist;
pub mod json;
mod point;
mod spec;
mod table;

pub use class::{
    distance, distance_to_class, distance_to_class_with_budget, is_member, relevant_variables, ClassSpec,
    DEFAULT_WORK_BUDGET,
};
pub use dist::{sample_restriction, Cell, Distribution, Explicit, RestrictionSample, Weights, MAX_PRODUCT_N};
pub use point::{full_mask, mask_indices, Mask, Point, MAX_N};
pub use spec::{cancel_monomials, DlRule, FunctionSpec, RdlRule, Repr, Term, TreeNode};
pub use table::{TruthTable, MAX_TABLE_N};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoolFnError {
    #[error("dimension {n} exceeds the limit {max}")]
    TooLarge { n: usize, max: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("variable {var} is outside [1, {n}]")]
    VarOutOfRange { var: i64, n: usize },
    #[error("term contains a variable and its negation (mask {0:#x})")]
    Contradictory(Mask),
    #[error("literal on x{0} repeated in one term")]
    DuplicateLiteral(usize),
    #[error("malformed representation: {0}")]
    Malformed(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("bad distribution: {0}")]
    BadDistribution(String),
    #[error("class enumeration exceeds the work budget of {budget}")]
    WorkBudget { budget: u64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
}
