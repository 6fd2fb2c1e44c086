use std::path::Path;
use std::process::{Command, Output};

fn trolllens(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trolllens"))
        .current_dir(dir)
        .env_remove("TROLLLENS_CONFIG")
        .args(args)
        .args(["--out", "out", "--set", "lda_iterations=40"])
        .output()
        .unwrap()
}

fn ok(out: Output) -> String {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn prepared() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    ok(trolllens(
        dir.path(),
        &["generate", "--accounts", "250", "--tweets", "12", "--corpus-out", "c.jsonl", "--conllu-out", "c.conllu"],
    ));
    ok(trolllens(dir.path(), &["ingest", "--corpus", "c.jsonl"]));
    ok(trolllens(dir.path(), &["annotate", "--conllu", "c.conllu"]));
    dir
}

#[test]
fn majority_row() {
    let dir = prepared();
    ok(trolllens(dir.path(), &["topics-fit"]));
    ok(trolllens(dir.path(), &["features-build"]));
    let stdout = ok(trolllens(dir.path(), &["evaluate", "--method", "majority"]));
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines[0], "method,precision_macro,recall_macro,f1_macro");
    let fields: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(fields[0], "majority");
    let f1: f64 = fields[3].parse().unwrap();
    assert!((f1 - 0.49495).abs() < 1e-4, "{f1}");
}

#[test]
fn topics_fit_is_reproducible() {
    let dir = prepared();
    ok(trolllens(dir.path(), &["topics-fit", "--k", "7", "--seed", "1"]));
    let first = std::fs::read(dir.path().join("out/topics.json")).unwrap();
    ok(trolllens(dir.path(), &["topics-fit", "--k", "7", "--seed", "1"]));
    let second = std::fs::read(dir.path().join("out/topics.json")).unwrap();
    assert_eq!(first, second);
    let shown = ok(trolllens(dir.path(), &["topics-show", "--top", "3"]));
    assert_eq!(shown.lines().filter(|l| l.starts_with("theme ")).count(), 7);
}

#[test]
fn report_lists_every_family() {
    let dir = prepared();
    ok(trolllens(dir.path(), &["topics-fit"]));
    ok(trolllens(dir.path(), &["features-build"]));
    let text = ok(trolllens(dir.path(), &["report", "--set", "cv_k=3"]));
    for name in [
        "Random Selection",
        "Majority Class",
        "Network Features",
        "Bag-of-Words",
        "Emotions",
        "Sentiment",
        "Bad & Sexual",
        "Stance",
        "Bias",
        "LIWC",
        "Morality",
        "All Theme-based",
        "Stylistic",
        "NLI",
        "All Features",
    ] {
        assert!(text.contains(name), "{name} missing from\n{text}");
    }
    let csv = std::fs::read_to_string(dir.path().join("out/report.csv")).unwrap();
    assert!(csv.starts_with("section,method,variant,precision_macro,recall_macro,f1_macro\n"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let missing = trolllens(dir.path(), &["features-build"]);
    assert_eq!(missing.status.code(), Some(2));
    let bad_config = trolllens(dir.path(), &["ingest", "--corpus", "nope.jsonl", "--set", "cv_k=1"]);
    assert_eq!(bad_config.status.code(), Some(1));
    let unknown_key = trolllens(dir.path(), &["ingest", "--set", "no_such_key=3"]);
    assert_eq!(unknown_key.status.code(), Some(1));
    let usage = trolllens(dir.path(), &["no-such-command"]);
    assert_eq!(usage.status.code(), Some(1));
    let help = Command::new(env!("CARGO_BIN_EXE_trolllens")).arg("--help").output().unwrap();
    assert_eq!(help.status.code(), Some(0));
}
