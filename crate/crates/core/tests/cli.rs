//! The `bftest` binary: exit codes and output shapes.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bftest"))
}

fn data(name: &str) -> String {
    format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn scratch(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("bftest-cli-{}-{name}", std::process::id()))
}

#[test]
fn test_prints_a_report() {
    let out = bin()
        .args(["test", "--class", "junta:k=3", "--spec", &data("parity3.json"), "--epsilon", "0.2", "--trials", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["trials"], 3);
    assert!(v["accept_rate"].is_number());
}

#[test]
fn config_errors_exit_2() {
    let cases: Vec<Vec<String>> = vec![
        vec!["test".into(), "--class".into(), "bogus:k=1".into(), "--spec".into(), data("parity3.json"), "--epsilon".into(), "0.2".into()],
        vec!["test".into(), "--class".into(), "junta:k=3".into(), "--spec".into(), data("missing.json"), "--epsilon".into(), "0.2".into()],
        vec!["test".into(), "--class".into(), "junta:k=3".into(), "--spec".into(), data("parity3.json"), "--epsilon".into(), "2".into()],
        vec!["test".into(), "--epsilon".into(), "0.2".into()],
        vec!["nonsense".into()],
    ];
    for args in cases {
        let out = bin().args(&args).output().unwrap();
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn learn_prints_a_hypothesis() {
    let out = bin()
        .args(["learn", "--learner", "monotone", "--spec", &data("monotone3.json"), "--epsilon", "0.1", "--delta", "0.1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["outcome"] == "learned" || v["outcome"] == "fail");
    assert!(v["ledger"]["mq"].is_u64());
    if v["outcome"] == "learned" {
        assert!(v["hypothesis"]["n"].is_u64());
    }
}

#[test]
fn bench_writes_csv() {
    let grid = scratch("grid.json");
    std::fs::write(&grid, r#"{"class": "junta", "sizes": [1, 2], "epsilons": [0.3], "improved": [false], "trials": 2, "seed": 1}"#).unwrap();
    let csv = scratch("out.csv");
    let out = bin().args(["bench", "--grid"]).arg(&grid).arg("--out").arg(&csv).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3, "{text}");
    assert!(lines[0].contains("size") && lines[0].contains("epsilon"));
    let _ = std::fs::remove_file(grid);
    let _ = std::fs::remove_file(csv);
}
