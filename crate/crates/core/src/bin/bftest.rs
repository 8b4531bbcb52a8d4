use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use bftest::boolfn::json::{function_to_value, parse_distribution};
use bftest::boolfn::{distance, Distribution, FunctionSpec, MAX_TABLE_N};
use bftest::harness::acceptance::run_all;
use bftest::harness::{
    load_function, parse_class, run_bench, run_experiment, BenchGrid, ExperimentConfig, HarnessError, InstanceSource,
    TesterKind,
};
use bftest::learners::{
    decision_list_budget, learn_decision_list, learn_monotone, learn_poly_unif, learn_polynomial, monotone_budget,
    poly_unif_budget, polynomial_budget, LearnerParams,
};
use bftest::oracle::{Oracle, TargetOracle};
use bftest::pipeline::Model;

#[path = "../../tests/common/naive.rs"]
mod naive;

const EXIT_CONFIG: u8 = 2;
const EXIT_ACCEPTANCE: u8 = 3;

#[derive(Parser)]
#[command(name = "bftest", version, about = "Testers and learners for Boolean function classes")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a tester on a function file for repeated seeded trials and print the report.
    Test {
        /// `junta:k=4`, `dnf:s=2`, or a JSON class object.
        #[arg(long)]
        class: String,
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value = "uniform")]
        model: Model,
        #[arg(long)]
        dist: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long)]
        delta: Option<f64>,
        /// Use the improved junta path.
        #[arg(long)]
        improved: bool,
        #[arg(long, value_enum, default_value = "auto")]
        tester: TesterArg,
        #[arg(long)]
        max_queries: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one learner once on a function file.
    Learn {
        #[arg(long, value_enum)]
        learner: LearnerArg,
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Term or monomial bound; the function's own count when absent.
        #[arg(long)]
        s: Option<usize>,
        /// Term size (monotone) or degree (poly), the function's largest term when absent; rule size (dlist), 1 when absent.
        #[arg(long)]
        r: Option<usize>,
        /// Decision-list length; `n` when absent.
        #[arg(long)]
        len: Option<usize>,
        /// Example distribution for `monotone`, `poly` and `dlist`.
        #[arg(long)]
        dist: Option<PathBuf>,
    },
    /// Sweep query counts over a grid and write one CSV row per cell.
    Bench {
        #[arg(long)]
        grid: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the acceptance suite.
    Selftest,
}

#[derive(Clone, Copy, ValueEnum)]
enum TesterArg {
    Auto,
    Composed,
    TermReduction,
    ListReduction,
}

#[derive(Clone, Copy, ValueEnum)]
enum LearnerArg {
    Monotone,
    Poly,
    PolyUnif,
    Dlist,
}

enum Failure {
    Config(String),
    Runtime(String),
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Generation { .. } => Failure::Runtime(e.to_string()),
            HarnessError::Config(m) => Failure::Config(m),
            _ => Failure::Config(e.to_string()),
        }
    }
}

fn config<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Config(e.to_string())
}

fn read_dist(path: &Option<PathBuf>) -> Result<Option<serde_json::Value>, Failure> {
    let Some(p) = path else { return Ok(None) };
    let text = std::fs::read_to_string(p).map_err(|e| config(format!("{}: {e}", p.display())))?;
    parse_distribution(&text).map_err(config)?;
    serde_json::from_str(&text).map(Some).map_err(config)
}

fn write_or_print(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Runtime(format!("{}: {e}", p.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn test_cmd(cmd: Cmd) -> Result<(), Failure> {
    let Cmd::Test { class, spec, epsilon, model, dist, seed, trials, delta, improved, tester, max_queries, out } = cmd
    else {
        unreachable!()
    };
    let class = parse_class(&class)?;
    let mut cfg = ExperimentConfig::new(
        class,
        InstanceSource::File { path: spec.display().to_string() },
        trials,
        epsilon,
        seed,
    );
    cfg.model = model;
    cfg.dist = read_dist(&dist)?;
    cfg.improved = improved;
    cfg.max_queries = max_queries;
    cfg.tester = match tester {
        TesterArg::Auto => TesterKind::Auto,
        TesterArg::Composed => TesterKind::Composed,
        TesterArg::TermReduction => TesterKind::TermReduction,
        TesterArg::ListReduction => TesterKind::ListReduction,
    };
    if let Some(d) = delta {
        cfg.delta = d;
    }
    cfg.validate()?;
    let rep = run_experiment(&cfg)?;
    eprintln!(
        "accept rate {:.3} over {} trials, ci95 [{:.3}, {:.3}], median queries {}",
        rep.accept_rate, rep.trials, rep.ci95[0], rep.ci95[1], rep.queries["total"].median
    );
    write_or_print(&out, &rep.to_json())
}

fn learn_cmd(cmd: Cmd) -> Result<(), Failure> {
    let Cmd::Learn { learner, spec, epsilon, delta, seed, s, r, len, dist } = cmd else { unreachable!() };
    let f: FunctionSpec = load_function(&spec.display().to_string())?;
    let n = f.n();
    let dist = match read_dist(&dist)? {
        Some(v) => parse_distribution(&v.to_string()).map_err(config)?,
        None => Distribution::Uniform,
    };
    if matches!(learner, LearnerArg::PolyUnif) && dist != Distribution::Uniform {
        return Err(config("poly-unif learns under the uniform law only"));
    }
    let rule = r.unwrap_or(1).max(1);
    let s = s.or(f.term_count()).unwrap_or(1).max(1);
    let r = r.or(f.max_term_size()).unwrap_or(n).max(1);
    let p = LearnerParams { r, d: r, ..LearnerParams::new(s, epsilon, delta) };
    p.validate().map_err(config)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut o = TargetOracle::new(f.clone(), dist.clone());
    let (result, budget) = match learner {
        LearnerArg::Monotone => (learn_monotone(&mut o, &p, &mut rng), monotone_budget(&p, n)),
        LearnerArg::Poly => (learn_polynomial(&mut o, &p, &mut rng), polynomial_budget(&p, n)),
        LearnerArg::PolyUnif => (learn_poly_unif(&mut o, &p, &mut rng), poly_unif_budget(&p, n)),
        LearnerArg::Dlist => {
            let len = len.unwrap_or(n);
            (
                learn_decision_list(&mut o, rule, len, epsilon, delta, false, &mut rng),
                decision_list_budget(n, rule, len, epsilon, delta, false),
            )
        }
    };
    let ledger = o.ledger();
    let report = match result {
        Ok(l) => {
            let err = if n <= MAX_TABLE_N { distance(&f, &l.hypothesis, &dist).ok() } else { None };
            json!({
                "outcome": "learned",
                "hypothesis": function_to_value(&l.hypothesis),
                "early_exit": l.early_exit,
                "error": err,
                "ledger": ledger,
                "budget": budget,
            })
        }
        Err(e) => json!({ "outcome": "fail", "reason": e.to_string(), "ledger": ledger, "budget": budget }),
    };
    println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    Ok(())
}

fn bench_cmd(grid: PathBuf, out: PathBuf) -> Result<(), Failure> {
    let text = std::fs::read_to_string(&grid).map_err(|e| config(format!("{}: {e}", grid.display())))?;
    let grid: BenchGrid = serde_json::from_str(&text).map_err(config)?;
    let rows = run_bench(&grid)?;
    let mut w = csv::Writer::from_path(&out).map_err(|e| Failure::Runtime(e.to_string()))?;
    for row in &rows {
        w.serialize(row).map_err(|e| Failure::Runtime(e.to_string()))?;
    }
    w.flush().map_err(|e| Failure::Runtime(e.to_string()))?;
    eprintln!("{} rows written to {}", rows.len(), out.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::try_parse().unwrap_or_else(|e| {
        let code = if e.use_stderr() { EXIT_CONFIG as i32 } else { 0 };
        let _ = e.print();
        std::process::exit(code);
    });
    let res = match cli.cmd {
        cmd @ Cmd::Test { .. } => test_cmd(cmd),
        cmd @ Cmd::Learn { .. } => learn_cmd(cmd),
        Cmd::Bench { grid, out } => bench_cmd(grid, out),
        Cmd::Selftest => {
            let results = run_all(&naive::SECOND);
            for r in &results {
                println!("{r}");
            }
            if results.iter().any(|r| !r.passed) {
                return ExitCode::from(EXIT_ACCEPTANCE);
            }
            Ok(())
        }
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(m)) => {
            eprintln!("config error: {m}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::FAILURE
        }
    }
}
