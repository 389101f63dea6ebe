use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn corpus() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

fn ahltl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ahltl")).args(args).current_dir(corpus()).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn check_fig4_verified() {
    let o = ahltl(&["check", "-s", "systems/fig4.ats", "-f", "formulas/fair.ahq", "-Z", "1"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).starts_with("outcome    verified at Z=1"));
}

#[test]
fn check_violated_exits_one() {
    let o = ahltl(&["check", "-s", "systems/diverge.ats", "-f", "formulas/od.ahq"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("lost in the admissible fragment"));
}

#[test]
fn check_fast_route_agrees() {
    let o = ahltl(&["check", "-s", "systems/diverge.ats", "-f", "formulas/od.ahq", "--fast"]);
    assert_eq!(code(&o), 1);
    let o = ahltl(&["check", "-s", "systems/xor2_l1.ats", "-f", "formulas/od.ahq", "--fast"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn sweep_stops_at_first_win() {
    let o = ahltl(&["check", "-s", "systems/cycle2.ats", "-f", "formulas/two_stutter.ahq", "--sweep-z", "1..3"]);
    assert_eq!(code(&o), 0);
    let err = stderr(&o);
    assert!(err.contains("Z=1: unknown"));
    assert!(err.contains("Z=2: verified"));
    assert!(!err.contains("Z=3"));
}

#[test]
fn unknown_exits_two() {
    let o = ahltl(&["check", "-s", "systems/cycle3.ats", "-f", "formulas/two_stutter.ahq", "-Z", "2"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn input_errors_exit_three() {
    let o = ahltl(&["check", "-s", "systems/fig4.ats", "-f", "missing.ahq"]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).starts_with("error: "));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.ahq");
    std::fs::write(&bad, "forall p1. G (").unwrap();
    let o = ahltl(&["check", "-s", "systems/fig4.ats", "-f", path_str(&bad)]);
    assert_eq!(code(&o), 3);

    let o = ahltl(&["check", "-f", "formulas/fair.ahq"]);
    assert_eq!(code(&o), 3);
    let o = ahltl(&["check", "-s", "systems/fig4.ats", "-f", "formulas/fair.ahq", "--bind", "zz=systems/fig4.ats"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn budget_exceeded_exits_four() {
    let o = ahltl(&["check", "-s", "systems/fig4.ats", "-f", "formulas/fair.ahq", "--max-vertices", "5"]);
    assert_eq!(code(&o), 4);
    assert!(stderr(&o).contains("capacity exceeded"));
}

#[test]
fn per_trace_bindings() {
    let o = ahltl(&[
        "check",
        "-f",
        "formulas/fair.ahq",
        "--bind",
        "p1=systems/fig4.ats",
        "--bind",
        "p2=systems/fig4.ats",
        "--output",
        "json",
    ]);
    assert_eq!(code(&o), 0);
    let j: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(j["bindings"]["p1"], "fig4");
    assert_eq!(j["bindings"]["p2"], "fig4");
}

#[test]
fn json_is_deterministic() {
    let args = ["check", "-s", "systems/buffer.ats", "-f", "formulas/od.ahq", "--output", "json"];
    let a = ahltl(&args);
    let b = ahltl(&args);
    assert_eq!(code(&a), 1);
    assert_eq!(a.stdout, b.stdout);
    let j: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(j["schema"], 1);
    assert_eq!(j["outcome"], "violated");
    assert_eq!(j["completeAtZ"], 1);
    assert!(j.get("timings").is_none());

    let mut with = args.to_vec();
    with.push("--timings");
    let j: serde_json::Value = serde_json::from_str(&stdout(&ahltl(&with))).unwrap();
    assert!(j["timings"]["total"].is_number());
}

#[test]
fn classify_summaries() {
    let o = ahltl(&["classify", "-f", "formulas/od.ahq"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("summary           admissible, complete at Z=1"));
    let o = ahltl(&["classify", "-f", "formulas/fair.ahq"]);
    assert!(stdout(&o).contains("summary           forall-exists; no completeness fragment applies"));
    let o = ahltl(&["classify", "-f", "formulas/two_stutter.ahq", "-s", "systems/cycle2.ats", "--output", "json"]);
    let j: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(j["schema"], 1);
    assert!(j["terminationDepth"]["p"].is_null());
}

#[test]
fn bench_corpus_passes() {
    let o = ahltl(&["bench", "cases"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert_eq!(stdout(&o).lines().filter(|l| l.ends_with("PASS")).count(), 18);
}

#[test]
fn bench_reports_mismatch_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let o = ahltl(&["bench", path_str(dir.path())]);
    assert_eq!(code(&o), 0);

    let sys = corpus().join("systems/diverge.ats");
    let form = corpus().join("formulas/od.ahq");
    let case = format!("system={}\nformula={}\nz=1\nexpect=verified\n", path_str(&sys), path_str(&form));
    std::fs::write(dir.path().join("a.case"), case).unwrap();
    std::fs::write(dir.path().join("b.case"), "system=nope.ats\n").unwrap();
    let o = ahltl(&["bench", path_str(dir.path()), "--output", "json"]);
    assert_eq!(code(&o), 1);
    let j: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let cases = j["cases"].as_array().unwrap();
    assert_eq!(cases.len(), 2);
    assert_eq!(cases[0]["outcome"], "violated");
    assert_eq!(cases[0]["pass"], false);
    assert_eq!(cases[1]["outcome"], "error");
}

#[test]
fn export_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("g.dot");
    let full = dir.path().join("full.dot");
    let hoa = dir.path().join("a.hoa");
    let script = dir.path().join("s.json");
    let witness = dir.path().join("w.json");
    std::fs::write(&script, r#"{ "paths": { "p1": { "prefix": ["s0", "s0"], "loop": ["s1", "s2"] } } }"#).unwrap();
    let o = ahltl(&[
        "export",
        "-s",
        "systems/fig4.ats",
        "-f",
        "formulas/fair.ahq",
        "-Z",
        "1",
        "--dot",
        path_str(&dot),
        "--full-dot",
        path_str(&full),
        "--hoa",
        path_str(&hoa),
        "--script",
        path_str(&script),
        "--witness",
        path_str(&witness),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(std::fs::read_to_string(&dot).unwrap().starts_with("digraph"));
    assert!(std::fs::read_to_string(&full).unwrap().starts_with("digraph"));
    let h = std::fs::read_to_string(&hoa).unwrap();
    assert!(h.starts_with("HOA: v1"));
    assert!(h.contains("acc-name: parity"));
    let w: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&witness).unwrap()).unwrap();
    assert_eq!(w["complete"], true);
    assert_eq!(w["traces"]["p1"]["prefix"], serde_json::json!(["s0", "s0"]));
    assert_eq!(w["traces"]["p2"]["prefix"][0], "s0");
}

#[test]
fn export_on_lost_game_fails() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("g.dot");
    let o = ahltl(&["export", "-s", "systems/cycle2.ats", "-f", "formulas/two_stutter.ahq", "-Z", "1", "--dot", path_str(&dot)]);
    assert_eq!(code(&o), 2);
    assert!(!dot.exists());
}
