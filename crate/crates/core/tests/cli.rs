use std::path::Path;
use std::process::Command;

use serde_json::Value;

use clone_forge::cli::run_args;
use clone_forge::corpus;
use clone_forge::report::Mode;
use clone_forge::subst::{SubstInstance, TruncatedAlgebra};

fn run(args: &[&str]) -> clone_forge::cli::Outcome {
    let mut all = vec!["clone-forge"];
    all.extend_from_slice(args);
    run_args(all, None)
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = run(&all);
    assert!(out.stderr.is_empty(), "{}", out.stderr);
    (out.code, serde_json::from_str(&out.stdout).unwrap())
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn check_f_passes_eight_diagrams() {
    let (code, v) = json(&["check-f"]);
    assert_eq!(code, 0);
    assert_eq!(v["overall"], "pass");
    assert_eq!(v["reports"][0]["checks"].as_array().unwrap().len(), 8);
    let (code, v) = json(&["check-f", "--s", "0,1"]);
    assert_eq!(code, 1);
    assert_eq!(v["overall"], "fail");
}

#[test]
fn finite_clone_lists_carrier_sizes() {
    let dir = tempfile::tempdir().unwrap();
    let meet = write(
        dir.path(),
        "meet.json",
        r#"{"carrier": 2, "operations": {"meet": {"arity": 2, "table": [0,0,0,1]}}}"#,
    );
    let (code, v) = json(&["finite-clone", "--input", &meet, "--max-arity", "4", "--threshold", "1000"]);
    assert_eq!(code, 0);
    assert_eq!(v["facts"]["carrier_sizes"], serde_json::json!([0, 1, 3, 7, 15]));
}

#[test]
fn broken_algebra_exits_one_with_a_replayable_witness() {
    let dir = tempfile::tempdir().unwrap();
    let m = corpus::isolating_mutants()
        .unwrap()
        .into_iter()
        .find(|m| m.target == Some("weakening"))
        .unwrap();
    let path = write(dir.path(), "broken.json", &serde_json::to_string(&m.algebra).unwrap());
    let (code, v) = json(&["check-subst", "--input", &path, "--bound", "4"]);
    assert_eq!(code, 1);
    let eq = &v["reports"][0];
    assert_eq!(eq["mode"], "equations");
    let failing: Vec<&Value> = eq["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["status"] == "fail")
        .collect();
    assert_eq!(failing.len(), 1);
    assert_eq!(failing[0]["name"], "weakening");
    let inst: SubstInstance<usize> =
        serde_json::from_value(failing[0]["witness"]["instance"].clone()).unwrap();
    assert!(matches!(inst, SubstInstance::Weakening { .. }));
    assert!(!inst.holds(&m.algebra, Mode::Equations).unwrap());
    // text form names the law and the witness
    let text = run(&["check-subst", "--input", &path, "--bound", "4"]).stdout;
    assert!(text.contains("[FAIL] weakening"));
    assert!(text.contains("witness"));
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", "{\"bound\": 1,\n \"carriers\": [1, 1],,}");
    let out = run(&["check-subst", "--input", &bad]);
    assert_eq!(out.code, 2);
    assert!(out.stdout.is_empty());
    assert!(out.stderr.contains("line 2"), "{}", out.stderr);

    let (tab, _) = TruncatedAlgebra::tabulate(
        &clone_forge::bridge::s_functor(
            clone_forge::clone::builtin_clone("initial").unwrap(),
            Default::default(),
        ),
        2,
    )
    .unwrap();
    let mut v = serde_json::to_value(&tab).unwrap();
    v["s"]["1"] = serde_json::json!([0, 0, 0]);
    let shape = write(dir.path(), "shape.json", &v.to_string());
    let out = run(&["check-subst", "--input", &shape]);
    assert_eq!(out.code, 2);

    let out = run(&["check-subst", "--builtin", "initial", "--bound", "0"]);
    assert_eq!(out.code, 2);
    let out = run(&["check-clone", "--builtin", "nothing"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("nothing"));
}

#[test]
fn non_functorial_tables_are_rejected_at_load() {
    let dir = tempfile::tempdir().unwrap();
    let m = corpus::isolating_mutants()
        .unwrap()
        .into_iter()
        .find(|m| m.target == Some("functoriality-composition"))
        .unwrap();
    let path = write(dir.path(), "nf.json", &serde_json::to_string(&m.algebra).unwrap());
    let out = run(&["check-subst", "--input", &path, "--bound", "4"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("not functorial"), "{}", out.stderr);
    for key in ["\"f\"", "\"g\"", "\"x\""] {
        assert!(out.stderr.contains(key), "{}", out.stderr);
    }
}

#[test]
fn range_overruns_name_the_stage() {
    let dir = tempfile::tempdir().unwrap();
    let t = corpus::tabulated_builtin("initial", 2).unwrap();
    let path = write(dir.path(), "a.json", &serde_json::to_string(&t).unwrap());
    let out = run(&["check-subst", "--input", &path, "--bound", "3"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("stage 3"), "{}", out.stderr);
}

#[test]
fn to_subst_output_reloads() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("s.json").to_string_lossy().into_owned();
    let (code, _) = json(&["to-subst", "--builtin", "initial", "--bound", "3", "--output", &out_path]);
    assert_eq!(code, 0);
    let (code, v) = json(&["check-subst", "--input", &out_path]);
    assert_eq!(code, 0);
    assert_eq!(v["reports"].as_array().unwrap().len(), 3);
    let (code, v) = json(&["to-clone", "--input", &out_path]);
    assert_eq!(code, 0);
    assert_eq!(v["facts"]["carrier_sizes"], serde_json::json!([0, 1]));
    // a free clone cannot be tabulated: its carriers are cut off by depth
    let dir2 = tempfile::tempdir().unwrap();
    let sig = write(dir2.path(), "sig.json", r#"{"operators": {"b": 2, "e": 0}}"#);
    let out = run(&["to-subst", "--signature", &sig, "--depth", "1", "--bound", "2", "--output", &out_path]);
    assert_eq!(out.code, 2);
}

#[test]
fn other_commands_pass_on_builtins() {
    for args in [
        vec!["check-clone", "--builtin", "arrow"],
        vec!["roundtrip", "--builtin", "initial"],
        vec!["enum-hom", "--builtin", "initial", "--bound", "2"],
        vec!["check-subst", "--builtin", "terminal"],
        vec!["to-clone", "--builtin", "initial"],
    ] {
        let (code, v) = json(&args);
        assert_eq!(code, 0, "{args:?}: {v}");
    }
    let (_, v) = json(&["enum-hom", "--builtin", "initial", "--bound", "2"]);
    // hom(m, n) of the theory of the initial clone has m^n elements
    assert_eq!(v["facts"]["hom_counts"]["2->2"], 4);
    assert_eq!(v["facts"]["hom_counts"]["1->0"], 1);
    assert_eq!(v["facts"]["hom_counts"]["0->1"], 0);
}

#[test]
fn environment_overrides_format() {
    let out = run_args(["clone-forge", "check-f", "--format", "text"], Some("json"));
    assert!(serde_json::from_str::<Value>(&out.stdout).is_ok());
    let out = run_args(["clone-forge", "check-f", "--format", "json"], Some("text"));
    assert!(out.stdout.starts_with("symmetric monoid"));
    let out = run_args(["clone-forge", "check-f"], Some("yaml"));
    assert_eq!(out.code, 2);
}

#[test]
fn json_keys_are_sorted_and_output_is_stable() {
    let a = run(&["check-subst", "--builtin", "initial", "--format", "json"]);
    let b = run(&["check-subst", "--builtin", "initial", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_str(&a.stdout).unwrap();
    let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert!(!a.stdout.contains("elapsed"));
    let timed = run(&["check-f", "--format", "json", "--timing"]);
    assert!(timed.stdout.contains("elapsed_ms"));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_clone-forge");
    let ok = Command::new(bin).arg("check-f").output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let bad = Command::new(bin).args(["check-subst", "--input", "/nonexistent.json"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("/nonexistent.json"));
    let usage = Command::new(bin).arg("no-such-command").output().unwrap();
    assert_eq!(usage.status.code(), Some(2));
}
