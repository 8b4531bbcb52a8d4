//! Seeded experiments: certified instances, repeated trials, query statistics and reports.
//!
//! Trial `i` of a run with master seed `s` draws from ChaCha8 seeded with `s` on stream `i`,
//! so results do not depend on thread scheduling. Reports carry no wall-clock data and
//! serialize with sorted keys; the same config always yields the same bytes.

pub mod acceptance;
pub mod instances;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::boolfn::json::{function_from_value, function_to_value, parse_distribution, parse_function};
use crate::boolfn::{distance_to_class_with_budget, BoolFnError, ClassSpec, Distribution, FunctionSpec, Point};
use crate::oracle::{Oracle, QueryLedger, TargetOracle};
use crate::pipeline::{tester_c, ClassConfig, Model, PipelineError, PipelineParams, TesterRun};
use crate::reduction::{tester_approx_c, tester_r_decision_list, ReductionParams};

pub use instances::{generate_instance, random_member, table_tree, Want};

/// Work budget for certification, in candidate-table words.
pub const CERTIFY_BUDGET: u64 = 200_000_000;

/// Distances within this of a threshold count as on it.
pub const DISTANCE_SLACK: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("configuration: {0}")]
    Config(String),
    #[error(transparent)]
    BoolFn(#[from] BoolFnError),
    #[error("no certified far instance for {class} within {attempts} attempts")]
    Generation { class: String, attempts: usize },
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl From<PipelineError> for HarnessError {
    fn from(e: PipelineError) -> Self {
        match e {
            PipelineError::Config(m) => HarnessError::Config(m),
            other => HarnessError::Config(other.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Classification {
    InClass,
    EpsFar { distance: f64 },
    Neither { distance: f64 },
    /// Certification refused, e.g. over the work budget.
    Uncertified { reason: String },
}

/// Exact placement of `spec` relative to `cls`: distance 0, at least `epsilon`, or between.
pub fn classify_instance(spec: &FunctionSpec, cls: &ClassSpec, epsilon: f64, dist: &Distribution) -> Classification {
    classify_with_budget(spec, cls, epsilon, dist, CERTIFY_BUDGET)
}

pub fn classify_with_budget(
    spec: &FunctionSpec,
    cls: &ClassSpec,
    epsilon: f64,
    dist: &Distribution,
    budget: u64,
) -> Classification {
    match distance_to_class_with_budget(spec, cls, dist, budget) {
        Err(e) => Classification::Uncertified { reason: e.to_string() },
        Ok(d) if d <= DISTANCE_SLACK => Classification::InClass,
        Ok(d) if d >= epsilon - DISTANCE_SLACK => Classification::EpsFar { distance: d },
        Ok(d) => Classification::Neither { distance: d },
    }
}

/// Smallest `m` with `exp(-2 gap^2 m) <= 1 - confidence`.
pub fn trials_needed(gap: f64, confidence: f64) -> usize {
    assert!(gap > 0.0 && gap < 1.0 && confidence > 0.0 && confidence < 1.0);
    ((1.0 / (1.0 - confidence)).ln() / (2.0 * gap * gap)).ceil().max(1.0) as usize
}

/// Inverse of [`trials_needed`]: the gap `m` trials resolve at `confidence`.
pub fn hoeffding_gap(m: usize, confidence: f64) -> f64 {
    ((1.0 / (1.0 - confidence)).ln() / (2.0 * m.max(1) as f64)).sqrt()
}

/// Two-sided 95% interval around an empirical rate over `m` trials.
pub fn ci95(rate: f64, m: usize) -> [f64; 2] {
    let g = hoeffding_gap(m, 0.975);
    [(rate - g).max(0.0), (rate + g).min(1.0)]
}

/// Which tester runs the class.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TesterKind {
    /// Term reduction for uncapped DNF and list reduction for decision lists under the
    /// uniform law, the composed tester otherwise.
    #[default]
    Auto,
    Composed,
    TermReduction,
    ListReduction,
}

/// Constants of the reduction front ends.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReductionConstants {
    pub lambda: f64,
    pub c: f64,
    pub c1: f64,
    pub c_prime: f64,
}

impl Default for ReductionConstants {
    fn default() -> Self {
        let r = ReductionParams::default();
        ReductionConstants { lambda: r.lambda, c: r.c, c1: r.c1, c_prime: r.c_prime }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case", deny_unknown_fields)]
pub enum InstanceSource {
    File { path: String },
    /// A function in the JSON file format.
    Inline { spec: Value },
    /// Generated from the master seed, or from each trial's stream when `per_trial`.
    Generate {
        n: usize,
        want: Want,
        #[serde(default)]
        per_trial: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub class: ClassSpec,
    #[serde(default)]
    pub tester: TesterKind,
    pub instance: InstanceSource,
    pub trials: usize,
    pub epsilon: f64,
    /// Overall failure probability; each of the five stages gets `delta / 5`.
    #[serde(default = "default_delta")]
    pub delta: f64,
    #[serde(default = "default_model")]
    pub model: Model,
    /// Distribution in the JSON file format; uniform when absent.
    #[serde(default)]
    pub dist: Option<Value>,
    pub seed: u64,
    #[serde(default)]
    pub improved: bool,
    /// Trials that go past this many queries stop and count as failures.
    #[serde(default)]
    pub max_queries: Option<u64>,
    #[serde(default)]
    pub reduction: ReductionConstants,
}

fn default_delta() -> f64 {
    1.0 / 3.0
}

fn default_model() -> Model {
    Model::Uniform
}

impl ExperimentConfig {
    pub fn new(class: ClassSpec, instance: InstanceSource, trials: usize, epsilon: f64, seed: u64) -> Self {
        ExperimentConfig {
            class,
            tester: TesterKind::Auto,
            instance,
            trials,
            epsilon,
            delta: default_delta(),
            model: Model::Uniform,
            dist: None,
            seed,
            improved: false,
            max_queries: None,
            reduction: ReductionConstants::default(),
        }
    }

    pub fn pipeline_params(&self) -> PipelineParams {
        PipelineParams {
            stage_delta: self.delta / 5.0,
            improved: self.improved,
            ..PipelineParams::new(self.epsilon, self.model)
        }
    }

    pub fn distribution(&self) -> Result<Distribution, HarnessError> {
        match &self.dist {
            None => Ok(Distribution::Uniform),
            Some(v) => Ok(parse_distribution(&v.to_string())?),
        }
    }

    /// The tester [`TesterKind::Auto`] resolves to.
    pub fn resolved_tester(&self) -> TesterKind {
        match (self.tester, self.model, self.class) {
            (TesterKind::Auto, Model::Uniform, ClassSpec::Dnf { term_cap: None, .. }) => TesterKind::TermReduction,
            (TesterKind::Auto, Model::Uniform, ClassSpec::DecisionList { .. } | ClassSpec::RDecisionList { .. }) => {
                TesterKind::ListReduction
            }
            (TesterKind::Auto, ..) => TesterKind::Composed,
            (t, ..) => t,
        }
    }

    fn reduction_params(&self) -> ReductionParams {
        let s = match self.class {
            ClassSpec::Dnf { s, .. }
            | ClassSpec::MonotoneDnf { s, .. }
            | ClassSpec::UnateDnf { s, .. }
            | ClassSpec::SparsePoly { s, .. } => s,
            ClassSpec::DecisionList { len } | ClassSpec::RDecisionList { len, .. } => len,
            _ => 1,
        };
        let c = self.reduction;
        ReductionParams { s, lambda: c.lambda, c: c.c, c1: c.c1, c_prime: c.c_prime }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |m: String| Err(HarnessError::Config(m));
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return bad(format!("delta {} outside (0,1)", self.delta));
        }
        self.pipeline_params().validate()?;
        self.distribution()?;
        let tester = self.resolved_tester();
        if tester != TesterKind::Composed && self.model != Model::Uniform {
            return bad("the reduction testers run under the uniform law only".into());
        }
        match tester {
            TesterKind::Composed => {
                ClassConfig::for_class(self.class)?;
            }
            TesterKind::TermReduction => {
                if !matches!(
                    self.class,
                    ClassSpec::Dnf { .. } | ClassSpec::SparsePoly { .. } | ClassSpec::MonotoneDnf { .. } | ClassSpec::UnateDnf { .. }
                ) {
                    return bad(format!("{} has no term reduction", self.class.name()));
                }
                self.reduction_params().validate()?;
            }
            TesterKind::ListReduction => {
                if !matches!(self.class, ClassSpec::DecisionList { .. } | ClassSpec::RDecisionList { .. }) {
                    return bad(format!("{} has no list reduction", self.class.name()));
                }
                self.reduction_params().validate()?;
            }
            TesterKind::Auto => unreachable!("resolved above"),
        }
        match &self.instance {
            InstanceSource::File { path } => {
                load_function(path)?;
            }
            InstanceSource::Inline { spec } => {
                function_from_value(spec)?;
            }
            InstanceSource::Generate { n, .. } => {
                if *n == 0 || *n > crate::boolfn::MAX_N {
                    return bad(format!("n = {n} outside [1, {}]", crate::boolfn::MAX_N));
                }
            }
        }
        Ok(())
    }
}

pub fn load_function(path: &str) -> Result<FunctionSpec, HarnessError> {
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::Config(format!("{path}: {e}")))?;
    parse_function(&text).map_err(|e| HarnessError::Config(format!("{path}: {e}")))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Accept,
    Reject,
    /// Panic, query cap or an enumeration the tester refused mid-run.
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialReport {
    pub trial: usize,
    /// Master seed; the trial draws from stream `trial`.
    pub seed: u64,
    pub outcome: Outcome,
    pub ledger: QueryLedger,
    /// Stage key of the last stage entered.
    pub stage_reached: String,
    pub detail: Option<String>,
    #[serde(skip)]
    pub wall_time: Duration,
}

/// Stops answering once the ledger passes `cap`.
struct Capped<'a> {
    inner: &'a mut dyn Oracle,
    cap: u64,
    hit: bool,
}

impl Capped<'_> {
    fn over(&mut self) -> bool {
        if self.inner.ledger().total() >= self.cap {
            self.hit = true;
        }
        self.hit
    }
}

impl Oracle for Capped<'_> {
    fn n(&self) -> usize {
        self.inner.n()
    }
    fn free(&self) -> crate::boolfn::Mask {
        self.inner.free()
    }
    fn mq(&mut self, x: Point) -> bool {
        if self.over() {
            return false;
        }
        self.inner.mq(x)
    }
    fn exq(&mut self, rng: &mut dyn RngCore) -> Point {
        if self.over() {
            return Point::zeros(self.n());
        }
        self.inner.exq(rng)
    }
    fn wexq(&mut self, rng: &mut dyn RngCore) -> Point {
        if self.over() {
            return Point::zeros(self.n());
        }
        self.inner.wexq(rng)
    }
    fn ledger(&self) -> QueryLedger {
        self.inner.ledger()
    }
}

/// The generator for trial `i`.
pub fn trial_rng(seed: u64, i: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i as u64);
    rng
}

/// Run the configured tester once on `f`.
pub fn run_tester(
    cfg: &ExperimentConfig,
    f: &FunctionSpec,
    dist: &Distribution,
    rng: &mut dyn RngCore,
) -> (Result<TesterRun, PipelineError>, QueryLedger, bool) {
    let mut target = TargetOracle::new(f.clone(), dist.clone());
    let mut capped = Capped { inner: &mut target, cap: cfg.max_queries.unwrap_or(u64::MAX), hit: false };
    let params = cfg.pipeline_params();
    let red = cfg.reduction_params();
    let run = match cfg.resolved_tester() {
        TesterKind::TermReduction => tester_approx_c(&mut capped, cfg.class, &params, &red, rng),
        TesterKind::ListReduction => {
            let (r, len) = match cfg.class {
                ClassSpec::RDecisionList { r, len } => (r, len),
                ClassSpec::DecisionList { len } => (1, len),
                _ => (1, 1),
            };
            tester_r_decision_list(&mut capped, r, len, &params, &red, rng)
        }
        _ => tester_c(&mut capped, cfg.class, &params, rng),
    };
    let hit = capped.hit;
    (run, target.ledger(), hit)
}

fn one_trial(cfg: &ExperimentConfig, fixed: Option<&FunctionSpec>, dist: &Distribution, i: usize) -> TrialReport {
    let start = Instant::now();
    let mut rng = trial_rng(cfg.seed, i);
    let caught = catch_unwind(AssertUnwindSafe(|| {
        let generated;
        let f = match (fixed, &cfg.instance) {
            (Some(f), _) => f,
            (None, InstanceSource::Generate { n, want, .. }) => {
                generated = generate_instance(&cfg.class, *n, *want, cfg.epsilon, dist, &mut rng);
                match &generated {
                    Ok(f) => f,
                    Err(e) => return Err(e.to_string()),
                }
            }
            (None, _) => unreachable!("file and inline instances are loaded once"),
        };
        Ok(run_tester(cfg, f, dist, &mut rng))
    }));
    let mut report = TrialReport {
        trial: i,
        seed: cfg.seed,
        outcome: Outcome::Fail,
        ledger: QueryLedger::default(),
        stage_reached: "none".into(),
        detail: None,
        wall_time: Duration::ZERO,
    };
    match caught {
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            report.detail = Some(format!("panic: {msg}"));
        }
        Ok(Err(msg)) => report.detail = Some(msg),
        Ok(Ok((run, ledger, hit))) => {
            report.ledger = ledger;
            match run {
                Err(e) => report.detail = Some(e.to_string()),
                Ok(run) => {
                    report.stage_reached = run.stage.key().into();
                    if hit {
                        report.detail = Some("query cap reached".into());
                    } else if run.accepted {
                        report.outcome = Outcome::Accept;
                    } else {
                        report.outcome = Outcome::Reject;
                        report.detail = run.rejection.map(|r| format!("{r:?}"));
                    }
                }
            }
        }
    }
    report.wall_time = start.elapsed();
    report
}

/// Minimum, lower median and maximum.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Spread {
    pub min: u64,
    pub median: u64,
    pub max: u64,
}

impl Spread {
    pub fn of(mut xs: Vec<u64>) -> Spread {
        if xs.is_empty() {
            return Spread::default();
        }
        xs.sort_unstable();
        Spread { min: xs[0], median: xs[(xs.len() - 1) / 2], max: xs[xs.len() - 1] }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub accept_rate: f64,
    pub ci95: [f64; 2],
    /// Spread per oracle kind, plus `total`.
    pub queries: BTreeMap<String, Spread>,
    /// Rejections by stage key. Failures are tallied under `fail`.
    pub stage_rejects: BTreeMap<String, usize>,
    pub fails: usize,
    pub seed: u64,
    pub trials: usize,
    pub config_echo: Value,
    pub trial_reports: Vec<TrialReport>,
}

impl ExperimentReport {
    pub fn reject_rate(&self) -> f64 {
        1.0 - self.accept_rate
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

/// Run `trials` seeded trials in parallel and aggregate them.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport, HarnessError> {
    cfg.validate()?;
    let dist = cfg.distribution()?;
    let fixed = match &cfg.instance {
        InstanceSource::File { path } => Some(load_function(path)?),
        InstanceSource::Inline { spec } => Some(function_from_value(spec)?),
        InstanceSource::Generate { n, want, per_trial: false } => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(u64::MAX);
            Some(generate_instance(&cfg.class, *n, *want, cfg.epsilon, &dist, &mut rng)?)
        }
        InstanceSource::Generate { per_trial: true, .. } => None,
    };
    let mut reports: Vec<TrialReport> =
        (0..cfg.trials).into_par_iter().map(|i| one_trial(cfg, fixed.as_ref(), &dist, i)).collect();
    reports.sort_by_key(|r| r.trial);
    let accepted = reports.iter().filter(|r| r.outcome == Outcome::Accept).count();
    let rate = accepted as f64 / cfg.trials as f64;
    let mut queries = BTreeMap::new();
    queries.insert("mq".to_string(), Spread::of(reports.iter().map(|r| r.ledger.mq).collect()));
    queries.insert("exq".to_string(), Spread::of(reports.iter().map(|r| r.ledger.exq).collect()));
    queries.insert("wexq".to_string(), Spread::of(reports.iter().map(|r| r.ledger.wexq).collect()));
    queries.insert("total".to_string(), Spread::of(reports.iter().map(|r| r.ledger.total()).collect()));
    let mut stage_rejects = BTreeMap::new();
    for r in &reports {
        match r.outcome {
            Outcome::Accept => {}
            Outcome::Reject => *stage_rejects.entry(r.stage_reached.clone()).or_insert(0) += 1,
            Outcome::Fail => *stage_rejects.entry("fail".to_string()).or_insert(0) += 1,
        }
    }
    let mut echo = serde_json::to_value(cfg).expect("configs serialize");
    if let (Some(f), Value::Object(m)) = (&fixed, &mut echo) {
        m.insert("instance_spec".into(), function_to_value(f));
    }
    Ok(ExperimentReport {
        accept_rate: rate,
        ci95: ci95(rate, cfg.trials),
        queries,
        stage_rejects,
        fails: reports.iter().filter(|r| r.outcome == Outcome::Fail).count(),
        seed: cfg.seed,
        trials: cfg.trials,
        config_echo: echo,
        trial_reports: reports,
    })
}

/// A query-count sweep: one experiment per (size, epsilon, improved) cell on generated members.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchGrid {
    /// Class with its size parameter swept: `junta`, `linear`, `term` sweep `k`;
    /// `monotone_dnf` (r = 2), `dnf`, `poly_f2` (d = 2) sweep `s`; `decision_list` sweeps `len`.
    pub class: String,
    pub sizes: Vec<usize>,
    pub epsilons: Vec<f64>,
    #[serde(default = "default_improved")]
    pub improved: Vec<bool>,
    /// Dimension; `max(16, 2 size)` when absent.
    #[serde(default)]
    pub n: Option<usize>,
    pub trials: usize,
    pub seed: u64,
    #[serde(default = "default_model")]
    pub model: Model,
}

fn default_improved() -> Vec<bool> {
    vec![false, true]
}

/// The class `name` at size parameter `size`.
pub fn sized_class(name: &str, size: usize) -> Result<ClassSpec, HarnessError> {
    Ok(match name {
        "junta" => ClassSpec::Junta { k: size },
        "linear" => ClassSpec::Linear { k: size },
        "term" => ClassSpec::Term { k: size },
        "monotone_dnf" => ClassSpec::MonotoneDnf { s: size, r: 2 },
        "dnf" => ClassSpec::Dnf { s: size, term_cap: None },
        "poly_f2" => ClassSpec::SparsePoly { s: size, d: 2 },
        "decision_list" => ClassSpec::DecisionList { len: size },
        other => return Err(HarnessError::Config(format!("unknown bench class {other:?}"))),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub class: String,
    pub size: usize,
    pub n: usize,
    pub epsilon: f64,
    pub improved: bool,
    pub trials: usize,
    pub accept_rate: f64,
    pub mq_median: u64,
    pub mq_max: u64,
    pub total_median: u64,
    pub total_max: u64,
}

pub fn run_bench(grid: &BenchGrid) -> Result<Vec<BenchRow>, HarnessError> {
    let mut rows = Vec::new();
    for &size in &grid.sizes {
        let class = sized_class(&grid.class, size)?;
        let n = grid.n.unwrap_or((2 * size).max(16));
        for &epsilon in &grid.epsilons {
            for &improved in &grid.improved {
                let mut cfg = ExperimentConfig::new(
                    class,
                    InstanceSource::Generate { n, want: Want::Member, per_trial: true },
                    grid.trials,
                    epsilon,
                    grid.seed,
                );
                cfg.model = grid.model;
                cfg.improved = improved;
                let rep = run_experiment(&cfg)?;
                rows.push(BenchRow {
                    class: grid.class.clone(),
                    size,
                    n,
                    epsilon,
                    improved,
                    trials: grid.trials,
                    accept_rate: rep.accept_rate,
                    mq_median: rep.queries["mq"].median,
                    mq_max: rep.queries["mq"].max,
                    total_median: rep.queries["total"].median,
                    total_max: rep.queries["total"].max,
                });
            }
        }
    }
    Ok(rows)
}

/// Parse a class argument: a JSON object such as `{"class":"junta","k":4}` or the short
/// form `junta:k=4`, `dnf:s=2`, `dnf:s=2,term_cap=3`.
pub fn parse_class(text: &str) -> Result<ClassSpec, HarnessError> {
    let t = text.trim();
    let v: Value = if t.starts_with('{') {
        serde_json::from_str(t).map_err(|e| HarnessError::Config(e.to_string()))?
    } else {
        let (name, rest) = t.split_once(':').unwrap_or((t, ""));
        let mut m = serde_json::Map::new();
        m.insert("class".into(), Value::String(name.into()));
        for kv in rest.split(',').filter(|s| !s.is_empty()) {
            let (k, val) = kv
                .split_once('=')
                .ok_or_else(|| HarnessError::Config(format!("expected key=value, got {kv:?}")))?;
            let num: u64 = val.trim().parse().map_err(|_| HarnessError::Config(format!("{k} must be an integer")))?;
            m.insert(k.trim().into(), Value::from(num));
        }
        if name == "dnf" && !m.contains_key("term_cap") {
            m.insert("term_cap".into(), Value::Null);
        }
        Value::Object(m)
    };
    serde_json::from_value(v).map_err(|e| HarnessError::Config(format!("bad class {text:?}: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hoeffding_counts() {
        assert_eq!(trials_needed(0.1, 0.95), 150);
        assert_eq!(trials_needed(0.999_999, 0.95), 2);
        assert!(hoeffding_gap(150, 0.95) <= 0.1);
    }

    #[test]
    fn class_arguments() {
        assert_eq!(parse_class("junta:k=4").unwrap(), ClassSpec::Junta { k: 4 });
        assert_eq!(parse_class("dnf:s=2").unwrap(), ClassSpec::Dnf { s: 2, term_cap: None });
        assert_eq!(parse_class(r#"{"class":"term","k":3}"#).unwrap(), ClassSpec::Term { k: 3 });
        assert!(parse_class("bogus:k=1").is_err());
    }

    #[test]
    fn spread_uses_lower_median() {
        assert_eq!(Spread::of(vec![4, 1, 3, 2]), Spread { min: 1, median: 2, max: 4 });
    }
}
