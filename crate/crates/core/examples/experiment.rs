//! A seeded repeated-trial experiment: accept rate with a Hoeffding interval, query
//! spreads and rejections by stage, as JSON. Also shows how many trials a gap needs.
//!
//! `cargo run --example experiment`

use bftest::boolfn::ClassSpec;
use bftest::harness::{run_experiment, trials_needed, ExperimentConfig, InstanceSource, Want};

fn main() {
    println!("trials for gap 0.1 at 95%: {}", trials_needed(0.1, 0.95));

    let member = ExperimentConfig::new(
        ClassSpec::Junta { k: 3 },
        InstanceSource::Generate { n: 16, want: Want::Member, per_trial: true },
        40,
        0.2,
        7,
    );
    let rep = run_experiment(&member).unwrap();
    println!("members: accept {:.3} ci95 {:?} total queries {:?}", rep.accept_rate, rep.ci95, rep.queries["total"]);

    let far = ExperimentConfig {
        instance: InstanceSource::Generate { n: 16, want: Want::Far, per_trial: true },
        ..member
    };
    let rep = run_experiment(&far).unwrap();
    println!("far: accept {:.3} rejects by stage {:?}", rep.accept_rate, rep.stage_rejects);

    // Config files use the same serde layout.
    println!("{}", serde_json::to_string_pretty(&far).unwrap());
}
