//! Instance certification, generation, trial counts and experiment reports.

mod common;

use bftest::boolfn::{ClassSpec, Distribution, FunctionSpec, Point, TruthTable};
use bftest::harness::{
    ci95, classify_instance, generate_instance, random_member, run_experiment, trials_needed, Classification,
    ExperimentConfig, InstanceSource, Outcome, Want,
};
use common::naive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

const TOL: f64 = 1e-9;

#[test]
fn classify_places_instances() {
    let u = Distribution::Uniform;
    let and = FunctionSpec::dnf_from_literals(5, &[vec![2, 4]]).unwrap();
    assert_eq!(classify_instance(&and, &ClassSpec::Junta { k: 2 }, 0.1, &u), Classification::InClass);

    let parity = FunctionSpec::linear(4, 0b111).unwrap();
    let one = ClassSpec::Junta { k: 1 };
    let want = naive::distance_to_class(&parity, &one, &u).unwrap();
    assert!((want - 0.5).abs() < TOL);
    match classify_instance(&parity, &one, 0.25, &u) {
        Classification::EpsFar { distance } => assert!((distance - want).abs() < TOL),
        other => panic!("{other:?}"),
    }
}

#[test]
fn classify_finds_the_middle_band() {
    // x1 on ten equally weighted points, with the label of one of them flipped.
    let points: Vec<u64> = vec![0, 1, 2, 3, 5, 6, 9, 10, 12, 15];
    let dist = Distribution::explicit(points.iter().map(|&x| (Point::new(4, x), 0.1)).collect()).unwrap();
    let f = FunctionSpec::truth_table(TruthTable::from_fn(4, |x| (x & 1 == 1) ^ (x == 6)).unwrap());
    let one = ClassSpec::Junta { k: 1 };
    let want = naive::distance_to_class(&f, &one, &dist).unwrap();
    assert!((want - 0.1).abs() < TOL);
    match classify_instance(&f, &one, 0.2, &dist) {
        Classification::Neither { distance } => assert!((distance - want).abs() < TOL),
        other => panic!("{other:?}"),
    }
}

#[test]
fn members_are_members() {
    let mut rng = ChaCha8Rng::seed_from_u64(701);
    let classes = [
        ClassSpec::Junta { k: 2 },
        ClassSpec::Linear { k: 2 },
        ClassSpec::Term { k: 3 },
        ClassSpec::MonotoneDnf { s: 2, r: 2 },
        ClassSpec::UnateDnf { s: 2, r: 2 },
        ClassSpec::Dnf { s: 2, term_cap: Some(2) },
        ClassSpec::SparsePoly { s: 2, d: 2 },
        ClassSpec::DecisionList { len: 3 },
        ClassSpec::RDecisionList { r: 2, len: 2 },
        ClassSpec::DecisionTree { size: 3 },
    ];
    for cls in &classes {
        for _ in 0..10 {
            let f = random_member(cls, 4, &mut rng).unwrap();
            assert_eq!(naive::distance_to_class(&f, cls, &Distribution::Uniform), Some(0.0), "{cls:?} {f:?}");
        }
    }
}

#[test]
fn far_generation_mostly_succeeds() {
    let cls = ClassSpec::Dnf { s: 2, term_cap: None };
    let ok = (0..100u64)
        .filter(|&seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            generate_instance(&cls, 10, Want::Far, 0.15, &Distribution::Uniform, &mut rng).is_ok_and(|f| {
                matches!(classify_instance(&f, &cls, 0.15, &Distribution::Uniform), Classification::EpsFar { .. })
            })
        })
        .count();
    assert!(ok >= 95, "{ok} of 100");
}

#[test]
fn trial_counts_follow_hoeffding() {
    assert_eq!(trials_needed(0.1, 0.95), 150);
    assert_eq!(trials_needed(0.999, 0.95), 2);
    // Halving the gap quadruples the count, up to rounding.
    let (a, b) = (trials_needed(0.1, 0.99), trials_needed(0.05, 0.99));
    assert!(b >= 4 * a - 4 && b <= 4 * a + 4);
    let [lo, hi] = ci95(0.5, 100);
    assert!(lo < 0.5 && hi > 0.5 && (0.5 - lo - (hi - 0.5)).abs() < TOL);
}

fn junta_config(trials: usize, seed: u64) -> ExperimentConfig {
    let spec = json!({"n": 8, "class": "dnf", "body": [[1, -3]]});
    ExperimentConfig::new(ClassSpec::Junta { k: 2 }, InstanceSource::Inline { spec }, trials, 0.2, seed)
}

#[test]
fn single_trial_report() {
    let rep = run_experiment(&junta_config(1, 3)).unwrap();
    assert_eq!(rep.trials, 1);
    assert_eq!(rep.trial_reports.len(), 1);
    assert_eq!(rep.config_echo["trials"], 1);
    assert!(rep.accept_rate == 0.0 || rep.accept_rate == 1.0);
    let v: serde_json::Value = serde_json::from_str(&rep.to_json()).unwrap();
    for key in ["accept_rate", "ci95", "queries", "stage_rejects", "seed", "trials", "config_echo", "trial_reports"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    for kind in ["mq", "exq", "wexq", "total"] {
        assert!(v["queries"].get(kind).is_some(), "missing {kind}");
    }
}

#[test]
fn same_seed_same_report() {
    let a = run_experiment(&junta_config(12, 9)).unwrap().to_json();
    let b = run_experiment(&junta_config(12, 9)).unwrap().to_json();
    assert_eq!(a, b);
    let c = run_experiment(&junta_config(12, 10)).unwrap().to_json();
    assert_ne!(a, c);
}

#[test]
fn query_cap_fails_trials() {
    let mut cfg = junta_config(4, 1);
    cfg.max_queries = Some(5);
    let rep = run_experiment(&cfg).unwrap();
    assert!(rep.trial_reports.iter().all(|t| t.outcome == Outcome::Fail));
    assert_eq!(rep.fails, 4);
    assert_eq!(rep.stage_rejects.get("fail"), Some(&4));
    assert_eq!(rep.accept_rate, 0.0);
}

#[test]
fn bad_configs_are_refused() {
    let mut cfg = junta_config(4, 1);
    cfg.epsilon = 1.5;
    assert!(run_experiment(&cfg).is_err());
    let mut cfg = junta_config(4, 1);
    cfg.trials = 0;
    assert!(run_experiment(&cfg).is_err());
}
