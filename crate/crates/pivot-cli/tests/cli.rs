//! End-to-end tests of the binary: exit codes, output shapes, parse
//! diagnostics, and determinism.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};
use tempfile::TempDir;

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        Workspace { dir: TempDir::new().expect("create temp dir") }
    }

    fn file(&self, name: &str, contents: &str) -> PathBuf {
        let path = self.dir.path().join(name);
        fs::write(&path, contents).expect("write input file");
        path
    }
}

fn pivot(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pivot"))
        .args(args)
        .env_remove("PIVOT_MAX_CELLS")
        .env_remove("PIVOT_MAX_PATHS")
        .output()
        .expect("run pivot binary")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("stderr is UTF-8")
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("process exited normally")
}

const PATH_IDEAL: &str = "vars: w x y z\ngens: w*x, x*y, y*z\n";
const I1: &str = "vars: u w x y z\ngens: w*x, x*y, y*z, w*z\n";
const I2: &str = "vars: u w x y z\ngens: u, w*x, x*y, y*z\n";

#[test]
fn scarf_number_of_the_four_generator_examples() {
    let ws = Workspace::new();
    let i2 = ws.file("i2.ideal", I2);
    let out = pivot(&["scarf", i2.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert_eq!(stdout(&out).trim(), "2");

    let i1 = ws.file("i1.ideal", I1);
    let out = pivot(&["scarf", i1.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).trim(), "2");
}

#[test]
fn betti_numbers_via_minimalization() {
    let ws = Workspace::new();
    let i1 = ws.file("i1.ideal", I1);
    let out = pivot(&["betti", i1.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert_eq!(stdout(&out).trim(), "1 4 4 1");

    let i2 = ws.file("i2.ideal", I2);
    let out = pivot(&["betti", i2.to_str().unwrap()]);
    assert_eq!(stdout(&out).trim(), "1 4 5 2");
}

#[test]
fn pivot_construction_succeeds_but_exactness_fails_without_a_gap() {
    let ws = Workspace::new();
    let path = ws.file("path.ideal", PATH_IDEAL);

    let out = pivot(&["pivot", path.to_str().unwrap(), "--indices", "1,2"]);
    assert_eq!(code(&out), 0, "construction itself succeeds");
    let text = stdout(&out);
    assert!(text.contains("gaps: none"));
    assert!(text.contains("resolution: false"));
    assert!(text.contains("ranks: 1 3 2"));

    let out = pivot(&["verify", path.to_str().unwrap(), "--what", "exactness", "--indices", "1,2"]);
    assert_eq!(code(&out), 1, "failed exactness is a mathematical negative");
    let text = stdout(&out);
    assert!(text.contains("[FAIL]"));
    assert!(text.contains("multidegree w*x*y"), "witness names the strand: {text}");
    assert!(text.contains("witness cycle"));

    let out = pivot(&["verify", path.to_str().unwrap(), "--what", "exactness", "--indices", "1,3"]);
    assert_eq!(code(&out), 0, "a gapped pivot set is a resolution: {}", stdout(&out));
}

#[test]
fn parse_errors_carry_positions_and_exit_2() {
    let ws = Workspace::new();

    let bad_var = ws.file("a.ideal", "vars: x y\ngens: x*q\n");
    let out = pivot(&["taylor", bad_var.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    let err = stderr(&out);
    assert!(err.contains("line 2, column 9"), "position in: {err}");
    assert!(err.contains("unknown variable `q`"));

    let non_minimal = ws.file("b.ideal", "vars: x y\ngens: x, x*y\n");
    let out = pivot(&["taylor", non_minimal.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    let err = stderr(&out);
    assert!(err.contains("generator 2 (x*y) is divisible by generator 1 (x)"), "{err}");

    let out = pivot(&["no-such-command"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn out_of_range_indices_are_usage_errors() {
    let ws = Workspace::new();
    let path = ws.file("path.ideal", PATH_IDEAL);
    let out = pivot(&["gaps", path.to_str().unwrap(), "--indices", "1,7"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("index 7 outside 1..=3"));
}

#[test]
fn json_output_is_structured_and_byte_deterministic() {
    let ws = Workspace::new();
    let path = ws.file("path.ideal", PATH_IDEAL);

    let first = pivot(&["taylor", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(code(&first), 0);
    let second = pivot(&["taylor", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(first.stdout, second.stdout, "byte-identical across runs");

    let doc: serde_json::Value = serde_json::from_str(&stdout(&first)).expect("valid JSON");
    let degrees = doc["degrees"].as_array().expect("degrees array");
    assert_eq!(degrees.len(), 4);
    let ranks: Vec<u64> = degrees.iter().map(|d| d["rank"].as_u64().unwrap()).collect();
    assert_eq!(ranks, vec![1, 3, 3, 1]);
    assert_eq!(degrees[1]["basis"][0]["cell"], serde_json::json!([1]));
    assert_eq!(degrees[1]["basis"][0]["multidegree"], serde_json::json!([1, 1, 0, 0]));

    let diffs = doc["differentials"].as_array().expect("differentials array");
    assert_eq!(diffs.len(), 3);
    assert_eq!(diffs[0]["rows"], 1);
    assert_eq!(diffs[0]["cols"], 3);
    // d_1 entry (0,0) is the monomial w*x with coefficient 1/1.
    let entry = &diffs[0]["entries"][0];
    assert_eq!(entry["poly"][0]["exps"], serde_json::json!([1, 1, 0, 0]));
    assert_eq!(entry["poly"][0]["num"], "1");
    assert_eq!(entry["poly"][0]["den"], "1");
}

#[test]
fn verify_emits_a_certificate_with_digest_and_version() {
    let ws = Workspace::new();
    let path = ws.file("path.ideal", PATH_IDEAL);
    let out = pivot(&[
        "verify",
        path.to_str().unwrap(),
        "--what",
        "d2",
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid JSON");
    assert!(doc["command"].as_str().unwrap().starts_with("pivot verify"));
    assert!(doc["inputs_digest"].as_str().unwrap().starts_with("sha256:"));
    assert!(!doc["tool_version"].as_str().unwrap().is_empty());
    let checks = doc["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    assert!(checks.iter().all(|c| c["pass"].as_bool().unwrap()));
}

#[test]
fn homotopy_lift_and_strand_exactness_run_end_to_end() {
    let ws = Workspace::new();
    let squares = ws.file("squares.ideal", "vars: x y\ngens: x^2, x*y, y^2\n");
    let mono = ws.file("mono.ci", "elem: x^2\n");

    let out = pivot(&[
        "shamash",
        squares.to_str().unwrap(),
        "--ci",
        mono.to_str().unwrap(),
        "--indices",
        "1,3",
        "--truncate",
        "5",
        "--exactness-bound",
        "6,6",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("ranks: 1 3 3 3 3 3"));
    assert!(text.contains("relabeled to pivot normal form: 1->1, 2->3, 3->2"));
    assert!(text.contains("verdict: all checks passed"));
}

#[test]
fn shamash_requires_acknowledgment_for_uncertified_sequences() {
    let ws = Workspace::new();
    let squares = ws.file("squares.ideal", "vars: x y\ngens: x^2, x*y, y^2\n");
    let binomial = ws.file("sum.ci", "elem: x^2 + y^2\n");

    let out = pivot(&[
        "shamash",
        squares.to_str().unwrap(),
        "--ci",
        binomial.to_str().unwrap(),
        "--truncate",
        "3",
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("--trust-regular"));

    let out = pivot(&[
        "shamash",
        squares.to_str().unwrap(),
        "--ci",
        binomial.to_str().unwrap(),
        "--truncate",
        "3",
        "--trust-regular",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("verdict: all checks passed"));
}

#[test]
fn invalid_matchings_are_mathematical_negatives() {
    let ws = Workspace::new();
    let path = ws.file("path.ideal", PATH_IDEAL);
    let bad = ws.file("bad.matching", "edge: 1,2 -> 2\n");
    let out = pivot(&["morse", path.to_str().unwrap(), "--matching", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("different lcms"));

    let good = ws.file("good.matching", "edge: 1,2,3 -> 1,3\n");
    let out = pivot(&["morse", path.to_str().unwrap(), "--matching", good.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("ranks: 1 3 2"));
}

#[test]
fn bounds_need_a_finite_scarf_number() {
    let ws = Workspace::new();
    let coprime = ws.file("coprime.ideal", "vars: u v w\ngens: u, v, w\n");
    let out = pivot(&["bounds", coprime.to_str().unwrap(), "--r", "1"]);
    assert_eq!(code(&out), 1, "no pivot bound exists: {}", stdout(&out));

    let i2 = ws.file("i2.ideal", I2);
    let out = pivot(&["bounds", i2.to_str().unwrap(), "--r", "1", "--max-degree", "2"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("scarf number: 2"));
    assert!(text.contains("10") && text.contains("6"), "degree-2 bounds: {text}");
}

#[test]
fn resource_caps_come_from_the_environment() {
    let ws = Workspace::new();
    let path = ws.file("path.ideal", PATH_IDEAL);
    let out = Command::new(env!("CARGO_BIN_EXE_pivot"))
        .args(["taylor", path.to_str().unwrap()])
        .env("PIVOT_MAX_CELLS", "4")
        .output()
        .expect("run pivot binary");
    assert_eq!(code(&out), 2, "cap of 4 cells rejects a 3-generator ideal");

    let out = Command::new(env!("CARGO_BIN_EXE_pivot"))
        .args(["taylor", path.to_str().unwrap()])
        .env("PIVOT_MAX_CELLS", "not-a-number")
        .output()
        .expect("run pivot binary");
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("PIVOT_MAX_CELLS"));
}
