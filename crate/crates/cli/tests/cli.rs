use std::path::Path;
use std::process::{Command, Output};

fn axy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_axy"))
        .args(args)
        .output()
        .expect("axy runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

fn schema() -> jsonschema::JSONSchema {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/output.schema.json");
    let value: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::JSONSchema::compile(&value).expect("schema compiles")
}

#[test]
fn count_examples() {
    for (a, n, r) in [("2", "4", "3"), ("1", "5", "4"), ("3", "0", "0")] {
        let out = axy(&["count", "--a", a, "--n", n, "--no-timings"]);
        assert!(out.status.success());
        let rows = csv_rows(&stdout(&out));
        assert_eq!(rows[0], ["a", "b", "c", "n", "R"]);
        assert_eq!(rows[1][4], r, "a={a} n={n}");
    }
}

#[test]
fn count_lists_solutions_when_verbose() {
    let out = axy(&["count", "--a", "2", "--n", "4", "-v", "--no-timings"]);
    let rows = csv_rows(&stdout(&out));
    assert_eq!(rows[1][5], "1:5;2:2;5:1");
}

#[test]
fn generalized_count() {
    // 2xy - 3x - y = 4 <=> (2x-1)(2y-3) = 11
    let out = axy(&["count", "--a", "2", "--b", "3", "--c", "1", "--n", "4", "-v", "--no-timings"]);
    let rows = csv_rows(&stdout(&out));
    assert_eq!(rows[1][4], "2");
    assert_eq!(rows[1][5], "1:7;6:2");
}

#[test]
fn sum_routes() {
    let out = axy(&["sum", "--a", "2", "--n", "10", "--no-timings"]);
    assert_eq!(csv_rows(&stdout(&out))[1][4..], ["26", "hyperbola"]);
    let out = axy(&["sum", "--a", "1", "--n", "5", "--no-timings"]);
    // d(1) + ... + d(6) = 1 + 2 + 2 + 3 + 2 + 4
    assert_eq!(csv_rows(&stdout(&out))[1][4..], ["14", "divisor"]);
    let out = axy(&["sum", "--a", "1", "--n", "2000000"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn scan_columns_and_first_row() {
    let out = axy(&["scan", "--a", "2", "--n-min", "10", "--n-max", "1000", "--points", "3", "--no-timings"]);
    assert!(out.status.success());
    let rows = csv_rows(&stdout(&out));
    assert_eq!(
        rows[0],
        ["a", "N", "S", "C_a", "main", "delta", "bound", "ratio", "warn_a_large"]
    );
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[1][1..3], ["10", "26"]);
    assert_eq!(rows[2][1], "100");
    assert_eq!(rows[3][1], "1000");
}

#[test]
fn scan_single_point_allows_negative_main() {
    let out = axy(&["scan", "--a", "2", "--n-min", "1", "--n-max", "1", "--points", "1", "--no-timings"]);
    let rows = csv_rows(&stdout(&out));
    assert_eq!(rows.len(), 2);
    let main: f64 = rows[1][4].parse().unwrap();
    assert!(main < 0.0);
}

#[test]
fn scan_flags_large_modulus() {
    let out = axy(&["scan", "--a", "1000000", "--n-min", "10", "--n-max", "1000", "--points", "2", "--no-timings"]);
    let rows = csv_rows(&stdout(&out));
    assert!(rows[1..].iter().all(|r| r[8] == "true"));
}

#[test]
fn exit_codes() {
    assert_eq!(axy(&["count", "--a", "0", "--n", "1"]).status.code(), Some(2));
    assert_eq!(axy(&["count", "--a", "x"]).status.code(), Some(2));
    assert_eq!(axy(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        axy(&["sum", "--a", "3", "--n", "18446744073709551615"]).status.code(),
        Some(3)
    );
    assert_eq!(
        axy(&["scan", "--a", "4", "--n-min", "10", "--n-max", "4611686018427387904", "--points", "2"])
            .status
            .code(),
        Some(3)
    );
    // an impossible tolerance turns verification into a failure
    let out = axy(&["verify", "lemma6", "--a-max", "3", "--tolerance", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(axy(&["verify", "all", "--tolerance", "1"]).status.code(), Some(2));
}

#[test]
fn verify_suites_pass() {
    let out = axy(&["verify", "lemma5", "--a-max", "100", "--no-timings"]);
    assert!(out.status.success());
    let rows = csv_rows(&stdout(&out));
    assert_eq!(rows.len() - 1, 99);
    assert!(rows[1..].iter().all(|r| r[7] == "true"));

    let out = axy(&["verify", "mobius", "--a-max", "10000", "--no-timings"]);
    assert!(out.status.success());
    assert_eq!(csv_rows(&stdout(&out)).len() - 1, 9999);

    let out = axy(&["verify", "oracle", "--a-max", "12", "--n-max", "2000", "--no-timings"]);
    assert!(out.status.success());
    let rows = csv_rows(&stdout(&out));
    assert!(rows[1..].iter().all(|r| r[5].parse::<f64>().unwrap() == 0.0));
    assert!(rows.iter().any(|r| r[0] == "oracle-general"));

    let out = axy(&["verify", "lemma5", "--a-max", "8", "--series-w", "1000000", "--no-timings"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("lemma5-series"));
}

#[test]
fn json_outputs_validate_against_schema() {
    let schema = schema();
    let invocations: [&[&str]; 7] = [
        &["count", "--a", "2", "--n", "4", "-v"],
        &["sum", "--a", "2", "--n", "10"],
        &["constant", "--a", "2", "--a-max", "6"],
        &["scan", "--a", "2", "--n-min", "10", "--n-max", "1000", "--points", "3"],
        &["fit", "--a", "3", "--n-min", "1000", "--n-max", "100000", "--points", "5"],
        &["verify", "integral", "--a-max", "6", "--no-timings"],
        &["verify", "lemma6", "--a-max", "4"],
    ];
    for args in invocations {
        let mut full = args.to_vec();
        full.extend(["--format", "json"]);
        let out = axy(&full);
        assert!(out.status.success(), "{args:?}");
        let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
        let msgs: Vec<String> = match schema.validate(&value) {
            Ok(()) => Vec::new(),
            Err(errors) => errors.map(|e| e.to_string()).collect(),
        };
        assert!(msgs.is_empty(), "{args:?} fails schema: {msgs:?}");
    }
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.json");
    let out = axy(&[
        "scan", "--a", "3", "--n-min", "100", "--n-max", "10000", "--points", "3",
        "--format", "json", "--no-timings", "--output", path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let value: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(value["rows"].as_array().unwrap().len(), 3);
    assert_eq!(value["parameters"]["a"], 3);
}

#[test]
fn repeated_runs_are_byte_identical() {
    for format in ["csv", "json"] {
        let args = [
            "scan", "--a", "5", "--n-min", "10", "--n-max", "1000000", "--points", "7",
            "--no-timings", "--threads", "3", "--format", format,
        ];
        let first = axy(&args);
        let second = axy(&args);
        assert!(first.status.success());
        assert_eq!(first.stdout, second.stdout);
    }
}
