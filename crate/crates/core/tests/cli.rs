use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn example(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polyglue")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn analyze_order10_pattern() {
    let o = run(&["analyze", "--pattern", path(&example("order10_gf4.pattern"))]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("order: 10\n"), "{text}");
    assert!(text.contains("t: 1\n"));
    assert!(text.contains("TwoByTwo"));
}

#[test]
fn analyze_parabolic_json() {
    let o = run(&["analyze", "--pattern", path(&example("parabolic_1_2.pattern")), "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["order"], 24);
    assert_eq!(v["predicted_order"], "24");
    assert_eq!(v["status"], "ok");
    for (_, pass) in v["assertions"].as_object().unwrap() {
        assert_eq!(pass, "pass");
    }
}

#[test]
fn malformed_pattern_exits_1_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.pattern");
    std::fs::write(&bad, "field GF(2)\nn 2\nsigma 1 2 {1}\n").unwrap();
    let o = run(&["analyze", "--pattern", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 3, column 11"), "{err}");
}

#[test]
fn missing_file_exits_1() {
    let o = run(&["analyze", "--pattern", "/nonexistent/pattern"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn cap_exceeded_exits_3() {
    let o = run(&["analyze", "--pattern", path(&example("full3_f2.pattern")), "--cap", "100"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn invariants_full2_dickson() {
    let o = run(&["invariants", "--pattern", path(&example("full2_f2.pattern")), "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let degrees: Vec<u64> = v["generators"].as_array().unwrap().iter().map(|g| g["degree"].as_u64().unwrap()).collect();
    assert_eq!(degrees, vec![2, 3]);
    assert_eq!(v["certificate"]["verdict"], "Polynomial");
    assert_eq!(v["generators"][0]["provenance"], "Dickson");
}

#[test]
fn invariants_example_pattern() {
    let o = run(&["invariants", "--pattern", path(&example("example_q2_a1_b2.pattern")), "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["generators"][0]["polynomial"], "x1");
    assert_eq!(v["generators"][1]["polynomial"], "x1^9*x2^3+x1^6*x2^6+x1^3*x2^9+x2^12");
    assert_eq!(v["generators"][1]["provenance"], "Glued");
    assert_eq!(v["order"], 12);
}

#[test]
fn invariants_order10_uses_search() {
    let o = run(&["invariants", "--pattern", path(&example("order10_gf4.pattern"))]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("Searched"), "{text}");
    assert!(text.contains("degree product: 10"));
    assert!(text.contains("verdict: Polynomial"));
}

#[test]
fn invariants_matrix_mode() {
    let o = run(&["invariants", "--generators", path(&example("stong_gf8.gens")), "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["order"], 8);
    assert!(v["method"].as_str().unwrap().starts_with("search"));
    assert_eq!(v["certificate"]["degree_product"], 8);

    let o = run(&["invariants", "--generators", path(&example("unitriangular3_f2.gens"))]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("method: orbit Chern classes"));
}

#[test]
fn search_budget_too_small_exits_4() {
    let o = run(&["invariants", "--generators", path(&example("stong_gf8.gens")), "--max-degree", "2"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stdout(&o).contains("Inconclusive"));
}

#[test]
fn verify_dickson_and_variables() {
    let pattern = example("full2_f2.pattern");
    let o = run(&["verify", "--pattern", path(&pattern), "--polys", path(&example("full2_dickson.polys"))]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verdict: Polynomial"));

    let o = run(&[
        "verify",
        "--pattern",
        path(&pattern),
        "--polys",
        path(&example("full2_variables.polys")),
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(5));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"], "Refuted");
    assert_eq!(v["witness"]["kind"], "NonInvariant");
}

#[test]
fn verify_trivial_pattern() {
    let dir = tempfile::tempdir().unwrap();
    let polys = dir.path().join("vars.polys");
    std::fs::write(&polys, "x1\nx2\nx3\n").unwrap();
    let o = run(&["verify", "--pattern", path(&example("trivial3.pattern")), "--polys", polys.to_str().unwrap(), "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["degree_product"], 1);
}

#[test]
fn verify_wrong_count_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let polys = dir.path().join("one.polys");
    std::fs::write(&polys, "x1\n").unwrap();
    let o = run(&["verify", "--pattern", path(&example("full2_f2.pattern")), "--polys", polys.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn json_output_round_trips_through_verify() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["order10_gf4.pattern", "parabolic_1_2.pattern", "sl2_f3.pattern"] {
        let out = dir.path().join(format!("{name}.json"));
        let o = run(&["invariants", "--pattern", path(&example(name)), "--json", "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        assert!(o.stdout.is_empty());
        let first: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
        let o = run(&["verify", "--pattern", path(&example(name)), "--polys", out.to_str().unwrap(), "--json"]);
        assert_eq!(o.status.code(), Some(0));
        let second: Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(first["certificate"]["verdict"], second["verdict"]);
        assert_eq!(first["certificate"]["degrees"], second["degrees"]);
    }
    let leftovers: Vec<_> = std::fs::read_dir(dir.path())
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.file_name().to_string_lossy().ends_with(".tmp"))
        .collect();
    assert!(leftovers.is_empty());
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(run(&["analyze"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}
