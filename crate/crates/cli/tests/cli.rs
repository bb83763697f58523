use std::path::PathBuf;
use std::process::{Command, Output};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::Value;

use tilecohom_cli::report::{parse_rat, AnalysisReport, MatrixReport, RegularityReport};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tilecohom"))
}

fn fixture(name: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    root.join(format!("{name}.sub"))
        .to_string_lossy()
        .into_owned()
}

fn scratch(name: &str, contents: &str) -> String {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn ok_json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_valid(&v);
    v
}

fn assert_valid(v: &Value) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("schema/report.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    let errors: Vec<String> = validator
        .iter_errors(v)
        .map(|e| format!("{} at {}", e, e.instance_path))
        .collect();
    assert!(errors.is_empty(), "schema violations: {errors:#?}");
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn frequency<'a>(v: &'a Value, patch: &str) -> &'a Value {
    v["frequencies"]
        .as_array()
        .unwrap()
        .iter()
        .find(|f| f["patch"] == patch)
        .unwrap_or_else(|| panic!("no frequency for {patch}"))
}

#[test]
fn thue_morse_analysis() {
    let tm = fixture("thue_morse");
    let v = ok_json(&["analyze", &tm, "--max-patch-len", "3", "--samples", "1500"]);
    assert_eq!(v["kind"], "analysis");
    assert_eq!(v["cohomology"]["k"], 2);
    assert_eq!(v["cohomology"]["d"], "3");
    assert_eq!(v["perron"]["lambda"]["coords"][0], "2/1");
    let ab = frequency(&v, "a b");
    assert_eq!(ab["value"]["coords"][0], "1/3");
    assert_eq!(frequency(&v, "a a")["value"]["coords"][0], "1/6");
    assert!(v["regularity"]["certificates"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["verified"] == true));
    let total: BigRational = v["frequencies"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|f| f["patch"].as_str().unwrap().len() == 3)
        .map(|f| parse_rat(f["value"]["coords"][0].as_str().unwrap()).unwrap())
        .sum();
    assert_eq!(total, rat(1, 1));
}

#[test]
fn exact_values_round_trip() {
    let tm = fixture("fib_variant");
    let out = run(&["analyze", &tm, "--max-patch-len", "2", "--samples", "500"]);
    assert!(out.status.success());
    let report: AnalysisReport = serde_json::from_slice(&out.stdout).unwrap();
    let again = serde_json::to_vec_pretty(&report).unwrap();
    let reread: AnalysisReport = serde_json::from_slice(&again).unwrap();
    assert_eq!(report, reread);
    for f in &report.frequencies {
        let coords: Vec<BigRational> = f
            .value
            .coords
            .iter()
            .map(|c| parse_rat(c).unwrap())
            .collect();
        assert_eq!(coords.len() + 1, f.value.minpoly.len());
    }
}

#[test]
fn fibonacci_variant_rank() {
    let v = ok_json(&[
        "analyze",
        &fixture("fib_variant"),
        "--max-patch-len",
        "2",
        "--samples",
        "500",
    ]);
    assert_eq!(v["cohomology"]["k"], 3);
}

#[test]
fn output_is_deterministic() {
    let tm = fixture("thue_morse");
    let args = [
        "analyze",
        tm.as_str(),
        "--max-patch-len",
        "2",
        "--samples",
        "800",
        "--seed",
        "7",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn analysis_with_convergence_block() {
    let v = ok_json(&[
        "analyze",
        &fixture("thue_morse"),
        "--max-patch-len",
        "2",
        "--samples",
        "300",
        "--scales",
        "10",
        "20",
        "40",
        "80",
        "160",
        "320",
        "640",
        "1280",
    ]);
    assert_eq!(v["convergence"]["rows"].as_array().unwrap().len(), 8);
}

#[test]
fn return_length_flag_changes_form_only() {
    let tm = fixture("thue_morse");
    let a = ok_json(&["analyze", &tm, "--max-patch-len", "2", "--samples", "300"]);
    let b = ok_json(&[
        "analyze",
        &tm,
        "--max-patch-len",
        "2",
        "--samples",
        "300",
        "--return-length",
        "L+1",
    ]);
    assert_eq!(b["regularity"]["return_length"]["coords"][0], "3/1");
    assert_eq!(frequency(&a, "a b")["value"], frequency(&b, "a b")["value"]);
    assert_eq!(code(&["analyze", &tm, "--return-length", "L-5"]), 2);
}

#[test]
fn matrix_mode_perron_data() {
    let input = scratch(
        "m_two.json",
        r#"{"matrix": [[1, 1], [2, 0]], "pairs": [{"q": [-2, -1, 1], "r": [1, 1]}]}"#,
    );
    let v = ok_json(&["matrix", &input]);
    assert_eq!(v["perron"]["lambda"]["coords"][0], "2/1");
    assert!((v["perron"]["gamma"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    let bound = |k: &str| parse_rat(v["perron"]["lambda2_modulus"][k].as_str().unwrap()).unwrap();
    assert!(bound("lo") <= rat(1, 1) && rat(1, 1) <= bound("hi"));
    assert_eq!(v["pairs"][0]["resultant"], "0");
    let report: MatrixReport = serde_json::from_value(v).unwrap();
    assert!(report.primitive);
}

#[test]
fn matrix_mode_right_eigenvector() {
    let input = scratch("m_a8b8.json", r#"{"matrix": [[8, 7], [8, 9]]}"#);
    let v = ok_json(&["matrix", &input]);
    assert_eq!(v["perron"]["lambda"]["coords"][0], "16/1");
    let freqs: Vec<BigRational> = v["perron"]["letter_frequencies"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| parse_rat(x["coords"][0].as_str().unwrap()).unwrap())
        .collect();
    assert_eq!(&freqs[0] * rat(8, 1), &freqs[1] * rat(7, 1));
}

#[test]
fn matrix_mode_reduced_resultant() {
    let input = scratch(
        "m_pairs.json",
        r#"{"matrix": [[1]], "pairs": [{"q": [-2, 1], "r": [1, 1]}]}"#,
    );
    let v = ok_json(&["matrix", &input]);
    assert_eq!(v["pairs"][0]["reduced_resultant"], "3");
}

#[test]
fn identity_is_not_primitive() {
    let input = scratch("m_id.json", r#"{"matrix": [[1, 0], [0, 1]]}"#);
    let v = ok_json(&["matrix", &input]);
    assert_eq!(v["primitive"], false);
    assert!(v["perron"].is_null());
}

#[test]
fn bad_matrices_are_usage_errors() {
    let neg = scratch("m_neg.json", r#"{"matrix": [[1, -1], [1, 1]]}"#);
    let ragged = scratch("m_ragged.json", r#"{"matrix": [[1, 1], [1]]}"#);
    let junk = scratch("m_junk.json", "not json");
    for f in [&neg, &ragged, &junk] {
        assert_eq!(code(&["matrix", f]), 2, "{f}");
    }
}

#[test]
fn regularity_with_given_controls() {
    let out = run(&[
        "regularity",
        &fixture("thue_morse"),
        "--patch",
        "aababb",
        "--controls",
        "ab",
        "aa",
        "--samples",
        "1000",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_valid(&v);
    let r: RegularityReport = serde_json::from_value(v).unwrap();
    assert!(r.certificate.verified);
    let c: Vec<BigRational> = r
        .certificate
        .coefficients
        .iter()
        .map(|x| parse_rat(x).unwrap())
        .collect();
    assert_eq!(c, vec![rat(1, 2), rat(-1, 2)]);
}

#[test]
fn convergence_json_and_csv() {
    let tm = fixture("nonpisot");
    let v = ok_json(&["convergence", &tm, "--patch", "a"]);
    assert!(v["convergence"]["rows"].as_array().unwrap().len() >= 8);
    let out = run(&["convergence", &tm, "--patch", "a", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("size,sup_deviation,samples\n"));
    assert!(text.lines().last().unwrap().starts_with("# patch=a"));
}

#[test]
fn out_flag_writes_file() {
    let target = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("out_flag.json");
    let input = scratch("m_out.json", r#"{"matrix": [[2, 1], [1, 1]]}"#);
    let out = run(&["matrix", &input, "--out", target.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(target).unwrap()).unwrap();
    assert_valid(&v);
}

#[test]
fn exit_codes() {
    let tm = fixture("thue_morse");
    assert_eq!(code(&["regularity", &tm, "--patch", "aaa"]), 5);
    assert_eq!(code(&["convergence", &tm, "--patch", "bbb"]), 5);
    assert_eq!(
        code(&["regularity", &tm, "--patch", "ab", "--controls", "aaa"]),
        5
    );
    assert_eq!(
        code(&["convergence", &tm, "--patch", "ab", "--scales", "100"]),
        2
    );
    assert_eq!(
        code(&["regularity", &tm, "--patch", "ab", "--controls", "ab", "ba"]),
        2
    );
    assert_eq!(code(&["analyze", &tm, "--frobnicate"]), 2);
    assert_eq!(code(&["analyze", "/nonexistent/rules.sub"]), 2);
    let reducible = scratch("reducible.sub", "a -> a b\nb -> b\n");
    assert_eq!(code(&["analyze", &reducible]), 3);
}

#[test]
fn parse_errors_name_the_line() {
    let bad = scratch("bad.sub", "a -> a b\nb => a\n");
    let out = run(&["analyze", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}
