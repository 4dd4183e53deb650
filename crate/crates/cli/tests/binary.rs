//! Black-box tests of the `ties` binary: exit codes, config-file runs, and
//! the ph/dist/train/eval plumbing.

use std::path::Path;
use std::process::{Command, Output};

fn ties(args: &[&str], dir: &Path, envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ties"));
    cmd.args(args).current_dir(dir);
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("spawning ties")
}

fn write_lexicon(dir: &Path) {
    std::fs::write(
        dir.join("lex.txt"),
        "4 3\n\
         red 1.0 0.2 0.1\n\
         green 0.1 1.0 0.3\n\
         blue 0.2 0.1 1.0\n\
         gray 0.5 0.5 0.5\n",
    )
    .unwrap();
}

fn write_corpus(dir: &Path, include_short: bool) {
    let words = ["red", "green", "blue", "gray"];
    let mut out = String::new();
    for d in 0..6 {
        let text: Vec<&str> = (0..40).map(|t| words[(t * (d + 1) + d) % 4]).collect();
        out.push_str(&format!(
            r#"{{"id": "doc{}", "text": "{}", "labels": ["l{}"]}}"#,
            d,
            text.join(" "),
            d % 2
        ));
        out.push('\n');
    }
    if include_short {
        out.push_str(r#"{"id": "stub", "text": "red", "labels": []}"#);
        out.push('\n');
    }
    std::fs::write(dir.join("docs.jsonl"), out).unwrap();
}

#[test]
fn clean_run_exits_zero_and_skips_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    write_lexicon(dir.path());
    write_corpus(dir.path(), false);
    let out = ties(
        &["extract", "--corpus", "docs.jsonl", "--lexicon", "lex.txt", "--out", "f.csv"],
        dir.path(),
        &[],
    );
    assert_eq!(out.status.code(), Some(0), "{out:?}");

    write_corpus(dir.path(), true);
    let out = ties(
        &[
            "extract", "--corpus", "docs.jsonl", "--lexicon", "lex.txt", "--out", "f.csv",
            "--report", "report.json",
        ],
        dir.path(),
        &[],
    );
    assert_eq!(out.status.code(), Some(2), "{out:?}");
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap())
            .unwrap();
    assert_eq!(report["skipped"][0]["id"], "stub");
    let features = std::fs::read_to_string(dir.path().join("f.csv")).unwrap();
    assert!(!features.contains("stub"));
    assert_eq!(features.lines().count(), 7);
}

#[test]
fn missing_lexicon_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    write_corpus(dir.path(), false);
    let out = ties(
        &["extract", "--corpus", "docs.jsonl", "--lexicon", "nope.txt", "--out", "f.csv"],
        dir.path(),
        &[],
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}

#[test]
fn config_file_run_with_env_worker_override() {
    let dir = tempfile::tempdir().unwrap();
    write_lexicon(dir.path());
    write_corpus(dir.path(), false);
    std::fs::write(
        dir.path().join("ties.toml"),
        r#"
[corpus]
path = "docs.jsonl"

[lexicon]
path = "lex.txt"

[window]
size = 3
kind = "arithmetic"

[output]
features = "f.jsonl"
report = "report.json"

[run]
workers = 5
"#,
    )
    .unwrap();
    let out = ties(
        &["extract", "--config", "ties.toml"],
        dir.path(),
        &[("TIES_WORKERS", "2")],
    );
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap())
            .unwrap();
    // Environment beats the config file's worker count.
    assert_eq!(report["workers"], 2);
    assert_eq!(report["features_written"], 6);
    assert!(dir.path().join("f.jsonl").exists());
}

#[test]
fn ph_then_dist_recovers_known_values() {
    let dir = tempfile::tempdir().unwrap();
    let s = 2f64.sqrt();
    let mut matrix = String::new();
    for row in [
        [0.0, 1.0, s, 1.0],
        [1.0, 0.0, 1.0, s],
        [s, 1.0, 0.0, 1.0],
        [1.0, s, 1.0, 0.0],
    ] {
        let cells: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
        matrix.push_str(&cells.join(","));
        matrix.push('\n');
    }
    std::fs::write(dir.path().join("square.csv"), matrix).unwrap();

    let out = ties(
        &["ph", "square.csv", "--out", "diagram.csv"],
        dir.path(),
        &[],
    );
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let diagram = std::fs::read_to_string(dir.path().join("diagram.csv")).unwrap();
    assert!(diagram.lines().any(|l| l.starts_with("1,1,1.414")));

    // Identical diagrams are at distance zero.
    let out = ties(
        &["dist", "diagram.csv", "diagram.csv", "--hdim", "1", "--metric", "w2"],
        dir.path(),
        &[],
    );
    assert_eq!(out.status.code(), Some(0));
    let printed: f64 = String::from_utf8_lossy(&out.stdout).trim().parse().unwrap();
    assert_eq!(printed, 0.0);

    // Against an empty diagram, the single loop bar pays its diagonal cost.
    std::fs::write(dir.path().join("empty.csv"), "hdim,birth,death\n").unwrap();
    let out = ties(
        &["dist", "diagram.csv", "empty.csv", "--hdim", "1", "--metric", "w1"],
        dir.path(),
        &[],
    );
    assert_eq!(out.status.code(), Some(0));
    let printed: f64 = String::from_utf8_lossy(&out.stdout).trim().parse().unwrap();
    assert!((printed - (s - 1.0) / 2.0).abs() < 1e-12);
}

#[test]
fn train_and_eval_through_the_binary() {
    let dir = tempfile::tempdir().unwrap();
    let mut csv = String::from("id,labels,v0_1,v1_1\n");
    for i in 0..12 {
        let (label, x, y) = if i % 2 == 0 {
            ("hot", 2.0 + 0.05 * i as f64, 0.2)
        } else {
            ("cold", 0.2, 2.0 + 0.05 * i as f64)
        };
        csv.push_str(&format!("r{i},{label},{x},{y}\n"));
    }
    std::fs::write(dir.path().join("features.csv"), csv).unwrap();

    let out = ties(
        &["train", "--features", "features.csv", "--seed", "11", "--out", "model.json"],
        dir.path(),
        &[],
    );
    assert_eq!(out.status.code(), Some(0), "{out:?}");

    let out = ties(
        &[
            "eval", "--features", "features.csv", "--model", "model.json", "--json", "-",
        ],
        dir.path(),
        &[],
    );
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let metrics: serde_json::Value =
        serde_json::from_str(String::from_utf8_lossy(&out.stdout).trim()).unwrap();
    assert!(metrics["accuracy"].as_f64().unwrap() > 0.9);

    let out = ties(
        &[
            "eval", "--features", "features.csv", "--model", "model.json", "--on", "bogus",
        ],
        dir.path(),
        &[],
    );
    assert_eq!(out.status.code(), Some(1));
}
