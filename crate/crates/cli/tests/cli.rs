use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/data");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn alsat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_alsat"))
        .args(args)
        .env_remove("ALSAT_MAX_POINTS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

#[test]
fn count_satisfiable_instance() {
    let o = alsat(&["count", &data("xyz_pair.cnf"), "--multiplier", "20"]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let v = json(&o);
    assert_eq!(v["count"], 6);
    assert_eq!(v["lattice_size"], 85);
    assert!((v["constant_term"].as_f64().unwrap() + 0.8125).abs() < 1e-6);
    assert_eq!(
        v["diagnostics"]["integer_freqs"][0],
        serde_json::json!([-13, 16, 13, -16])
    );
}

#[test]
fn count_unsatisfiable_instances_exit_20() {
    let o = alsat(&["count", &data("contradiction.cnf"), "--multiplier", "20"]);
    assert_eq!(o.status.code(), Some(20));
    let text = stdout(&o);
    assert!(text.contains("\"constant_term\": -1.0"), "{text}");
    assert!(text.contains("\"count\": 0"), "{text}");

    let o = alsat(&["count", &data("unsat_two_sat.cnf"), "--preset", "onevar"]);
    assert_eq!(o.status.code(), Some(20));
}

#[test]
fn oversized_instance_is_an_error() {
    // 24 fresh variables exceed the default sign-vector scan limit.
    let o = alsat(&["count", &data("all_patterns.cnf")]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("min_max_frequency"), "{err}");
    // The enumeration oracle still handles it.
    let o = alsat(&["oracle", &data("all_patterns.cnf")]);
    assert_eq!(o.status.code(), Some(20));
    assert_eq!(json(&o)["count"], 0);
}

#[test]
fn parse_errors_exit_1() {
    let o = alsat(&["count", &data("mixed_width.cnf")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("parse"));
    let o = alsat(&["count", &data("missing.cnf")]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn oracle_reports_exact_constant() {
    let o = alsat(&["oracle", &data("xyz_pair.cnf")]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["count"], 6);
    assert_eq!(v["constant_term_exact"], "-13/16");
}

#[test]
fn verify_agrees() {
    let o = alsat(&["verify", &data("xyz_pair.cnf"), "--multiplier", "20"]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let v = json(&o);
    for key in ["lattice", "enumeration", "expansion", "inverse_expansion"] {
        assert_eq!(v[key], 6, "{key}");
    }
    let o = alsat(&["verify", &data("two_sat_pair.cnf")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["lattice"], 2);
}

#[test]
fn spectrum_csv() {
    let o = alsat(&["spectrum", "--preset", "onevar", "--from", "2", "--to", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "n,min_max_frequency,max_max_frequency,argmin_signs"
    );
    assert!(lines[1].starts_with("2,0.279"), "{}", lines[1]);
    assert!(lines[2].starts_with("3,0.00744"), "{}", lines[2]);

    let o = alsat(&["spectrum", "--from", "17", "--to", "17"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn profile_csv() {
    let o = alsat(&[
        "profile",
        "--signs",
        "-1;1;-1;-1;1;-1",
        "--t-start",
        "1",
        "--t-end",
        "1.04245",
        "--samples",
        "2",
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let text = stdout(&o);
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert!((rows[0][1] + 0.0111).abs() < 5e-4);
    assert!((rows[1][1] - 3.85e-5).abs() < 5e-6);
    let o = alsat(&["profile", "--signs", "0;0", "--samples", "5"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn reports_are_reproducible_across_thread_counts() {
    let args = ["count", &data("two_sat_pair.cnf")];
    let a = alsat(&args);
    let b = alsat(&[args[0], args[1], "--threads", "1"]);
    let c = alsat(&[args[0], args[1], "--threads", "3"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn timing_is_opt_in() {
    let plain = alsat(&["count", &data("two_sat_pair.cnf")]);
    assert!(json(&plain).get("wall_time_seconds").is_none());
    let timed = alsat(&["count", &data("two_sat_pair.cnf"), "--timing"]);
    assert!(json(&timed)["wall_time_seconds"].as_f64().unwrap() >= 0.0);
}

#[test]
fn budget_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_alsat"))
        .args(["count", &data("two_sat_pair.cnf")])
        .env("ALSAT_MAX_POINTS", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget"));
    let forced = Command::new(env!("CARGO_BIN_EXE_alsat"))
        .args(["count", &data("two_sat_pair.cnf"), "--force"])
        .env("ALSAT_MAX_POINTS", "10")
        .output()
        .unwrap();
    assert_eq!(forced.status.code(), Some(0));
}

#[test]
fn output_file_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.csv");
    let o = alsat(&[
        "count",
        &data("two_sat_pair.cnf"),
        "--format",
        "csv",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(out).unwrap();
    assert!(text.starts_with("count,satisfiable,constant_term"));
    assert!(text.lines().nth(1).unwrap().starts_with("2,true,-0.75,"));
}

#[test]
fn degenerate_modulus_is_reported() {
    let o = alsat(&[
        "count",
        &data("xyz_pair.cnf"),
        "--multiplier",
        "20",
        "--modulus",
        "1",
    ]);
    // At l = 1 the lattice collapses to the all-ones point; here that gives
    // C = -1, a valid-looking but wrong answer, so verify must catch it.
    assert_eq!(o.status.code(), Some(20));
    let v = alsat(&[
        "verify",
        &data("xyz_pair.cnf"),
        "--multiplier",
        "20",
        "--modulus",
        "1",
    ]);
    assert_eq!(v.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&v.stderr).contains("mismatch"));
}
