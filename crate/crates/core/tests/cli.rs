use std::path::Path;
use std::process::{Command, Output};

const C2_C2_SPEC: &str = r#"{
  "prime_set": [2, 3],
  "exceptional": {
    "a": {"group": {"kind": "cyclic", "n": 2}},
    "b": {"group": {"kind": "cyclic", "n": 2}}
  }
}"#;

const NEGATION: &str = r#"{
  "coeff": [3],
  "exceptional": {
    "a": {"action": [{"element": 1, "matrix": [[-1]]}]},
    "b": {"action": [{"element": 1, "matrix": [[-1]]}]}
  }
}"#;

fn corprod(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_corprod"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn setup() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("spec.json"), C2_C2_SPEC).unwrap();
    std::fs::write(dir.path().join("module.json"), NEGATION).unwrap();
    dir
}

fn records(out: &Output) -> Vec<serde_json::Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

#[test]
fn exact_check_worked_instance() {
    let dir = setup();
    let out = corprod(
        &["exact-check", "--spec", "spec.json", "--module", "module.json", "--format", "structured"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let recs = records(&out);
    assert_eq!(recs.len(), 1);
    assert_eq!(recs[0]["result"], "pass");
    assert_eq!(recs[0]["invariant_factors"]["h1"], serde_json::json!([3]));
    assert_eq!(recs[0]["invariant_factors"]["sum_a_mod_fixed"], serde_json::json!([3, 3]));
}

#[test]
fn corrupted_subgroup_exits_2() {
    let dir = setup();
    let bad = r#"{"prime_set": [2], "exceptional": {"a": {"group": {"kind": "cyclic", "n": 4}, "subgroup_elements": [0, 1]}}}"#;
    std::fs::write(dir.path().join("bad.json"), bad).unwrap();
    let out = corprod(&["validate", "--spec", "bad.json", "--format", "structured"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(out.stderr.trim_ascii()).unwrap();
    assert!(err["error"].as_str().unwrap().contains("not a subgroup"));
}

#[test]
fn parse_error_exits_2() {
    let dir = setup();
    std::fs::write(dir.path().join("junk.json"), "{\"prime_set\": ").unwrap();
    let out = corprod(&["abelianize", "--spec", "junk.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let out = corprod(&["exact-check", "--spec", "spec.json"], dir.path());
    assert_eq!(out.status.code(), Some(2), "missing --module");
}

#[test]
fn refusal_is_a_failed_check() {
    let dir = setup();
    let out = corprod(
        &["cohomology", "--degree", "3", "--spec", "spec.json", "--module", "module.json"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("FAIL cohomology/3"));
}

#[test]
fn corpus_seed_0_is_green_and_reproducible() {
    let dir = setup();
    let args = ["corpus", "--seed", "0", "--count", "30", "--format", "structured", "--out", "r.jsonl"];
    let first = corprod(&args, dir.path());
    assert_eq!(first.status.code(), Some(0));
    let recs = records(&first);
    assert_eq!(recs.len(), 30);
    assert!(recs.iter().all(|r| r["result"] == "pass"));

    let second = corprod(&args, dir.path());
    assert_eq!(first.stdout, second.stdout);
    let appended = std::fs::read(dir.path().join("r.jsonl")).unwrap();
    assert_eq!(appended, [first.stdout.clone(), second.stdout].concat());
}

#[test]
fn every_command_runs() {
    let dir = setup();
    for cmd in ["validate", "abelianize", "cohomology", "duality-check", "cross-check", "colimit", "topo-check"] {
        let out = corprod(&[cmd, "--spec", "spec.json", "--module", "module.json"], dir.path());
        assert_eq!(out.status.code(), Some(0), "{cmd}: {}", String::from_utf8_lossy(&out.stderr));
    }
    let c2 = r#"{"prime_set": [2], "tail": {"group": {"kind": "cyclic", "n": 2}, "subgroup_generators": [1]}}"#;
    let tower = format!(r#"{{"levels": [{c2}, {c2}], "transitions": [{{"tail": {{"images": [0, 1]}}}}]}}"#);
    std::fs::write(dir.path().join("tower.json"), tower).unwrap();
    let out = corprod(&["tower-check", "--tower", "tower.json"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}
