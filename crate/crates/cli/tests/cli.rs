use std::process::{Command, Output};

use serde_json::Value;

fn qfp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qfp")).args(args).output().expect("spawn qfp")
}

fn json(args: &[&str]) -> Value {
    let out = qfp(args);
    assert!(out.status.success(), "qfp {args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn code_of(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn swap_test_hadamard_example() {
    let v = json(&["swap-test", "--code", "hadamard", "--n", "4", "--x", "0101", "--y", "0110", "--trials", "100000", "--seed", "1"]);
    let r = &v["result"];
    assert_eq!(r["analytic"]["p_one"], 0.375);
    assert!((r["circuit"]["p_one"].as_f64().unwrap() - 0.375).abs() < 1e-10);
    let sampled = r["sampled"]["p_one"].as_f64().unwrap();
    assert!((sampled - 0.375).abs() <= r["deltas"]["sampled_three_sigma"].as_f64().unwrap());
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["seed"], 1);
    assert_eq!(v["config"]["x"], "0101");
}

#[test]
fn swap_test_equal_inputs_are_zero_everywhere() {
    for states in ["fingerprint", "random", "sign-vector"] {
        let v = json(&["swap-test", "--states", states, "--dim", "8", "--x-equals-y", "--trials", "1000"]);
        let r = &v["result"];
        for path in ["analytic", "circuit", "sampled"] {
            assert_eq!(r[path]["p_one"], 0.0, "{states}/{path}");
        }
    }
}

#[test]
fn swap_test_skips_oversized_circuit() {
    let v = json(&["swap-test", "--n", "11", "--trials", "10"]);
    assert!(v["result"]["circuit"]["skipped"].is_string());
    assert!(v["result"]["deltas"]["circuit_minus_analytic"].is_null());
}

#[test]
fn malformed_bit_string_names_the_flag() {
    let out = qfp(&["swap-test", "--x", "01a1"]);
    assert_eq!(code_of(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("--x"));
    let out = qfp(&["swap-test", "--n", "4", "--x", "010"]);
    assert_eq!(code_of(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("--x"));
}

#[test]
fn perm_test_examples() {
    let v = json(&["perm-test", "--k", "2", "--gamma", "0"]);
    let r = &v["result"];
    assert!((r["closed_form"].as_f64().unwrap() - 1.0 / 6.0).abs() < 1e-12);
    assert!((r["projection"]["p_equal"].as_f64().unwrap() - 1.0 / 6.0).abs() < 1e-9);

    let v = json(&["perm-test", "--k", "1", "--gamma", "0.5"]);
    assert!((v["result"]["closed_form"].as_f64().unwrap() - 0.625).abs() < 1e-12);

    let v = json(&["perm-test", "--k", "60", "--gamma", "0.3", "--trials", "10"]);
    let r = &v["result"];
    assert!(r["projection"]["skipped"].is_string());
    assert!(r["closed_form"].as_f64().unwrap() > 0.0);
    let b = &r["bounds"];
    let closed = r["closed_form"].as_f64().unwrap();
    assert!(b["lower"].as_f64().unwrap() <= closed && closed <= b["upper"].as_f64().unwrap());
}

#[test]
fn perm_test_rejects_bad_gamma() {
    assert_eq!(code_of(&qfp(&["perm-test", "--gamma", "1.5"])), 2);
    assert_eq!(code_of(&qfp(&["perm-test", "--k", "0"])), 2);
}

#[test]
fn smp_run_files_are_identical() {
    let dir = tempfile::tempdir().unwrap();
    let paths: Vec<_> = ["a.json", "b.json"].iter().map(|f| dir.path().join(f)).collect();
    for p in &paths {
        let out = qfp(&[
            "smp-run", "--protocol", "quantum", "--code", "hadamard", "--n", "8", "--k", "5",
            "--pairs", "forced-unequal", "--trials", "100000", "--seed", "42",
            "--out", p.to_str().unwrap(),
        ]);
        assert_eq!(code_of(&out), 0);
    }
    let a = std::fs::read(&paths[0]).unwrap();
    assert_eq!(a, std::fs::read(&paths[1]).unwrap());
    let v: Value = serde_json::from_slice(&a).unwrap();
    let r = &v["result"];
    assert!((r["theory_error_bound"].as_f64().unwrap() - 0.095367431640625).abs() < 1e-12);
    assert_eq!(r["trials_unequal"], 100000);
}

#[test]
fn smp_run_csv_is_one_row() {
    let out = qfp(&["smp-run", "--protocol", "shared-key", "--r", "3", "--trials", "500", "--format", "csv"]);
    assert_eq!(code_of(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header = reader.headers().unwrap().clone();
    let rows: Vec<_> = reader.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 1);
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    assert_eq!(&rows[0][col("result.protocol_id")], "shared-key");
    assert_eq!(&rows[0][col("result.repetitions")], "3");
    assert_eq!(&rows[0][col("version")], env!("CARGO_PKG_VERSION"));
}

#[test]
fn smp_run_adversarial_pairs() {
    let v = json(&[
        "smp-run", "--protocol", "mixture", "--n", "3", "--pairs", "adversarial",
        "--pair", "000:000", "--pair", "101:011", "--trials", "200",
    ]);
    assert_eq!(v["result"]["trials_equal"], 100);
    assert_eq!(v["result"]["trials_unequal"], 100);
    assert_eq!(code_of(&qfp(&["smp-run", "--protocol", "quantum", "--n", "3", "--pairs", "adversarial"])), 2);
    assert_eq!(code_of(&qfp(&["smp-run", "--protocol", "quantum", "--pair", "000:001", "--n", "3"])), 2);
}

#[test]
fn unknown_protocol_exits_2() {
    let out = qfp(&["smp-run", "--protocol", "telepathy"]);
    assert_eq!(code_of(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("telepathy"));
}

#[test]
fn capability_guard_exits_3() {
    assert_eq!(code_of(&qfp(&["codes", "--n", "30"])), 3);
    assert_eq!(code_of(&qfp(&["smp-run", "--protocol", "quantum", "--n", "40", "--trials", "1"])), 3);
    assert_eq!(code_of(&qfp(&["nearset", "--n", "20", "--delta", "0.5"])), 3);
}

#[test]
fn nearset_set_mode() {
    let v = json(&["nearset", "--n", "8", "--delta", "0.25", "--seeds", "20"]);
    let r = &v["result"];
    assert_eq!(r["d"], 355);
    assert_eq!(r["audits"].as_array().unwrap().len(), 20);
    assert!(r["union_bound_log2"].as_f64().unwrap() < 0.0);
    let total = r["total_violating_pairs"].as_f64().unwrap();
    let expected = r["expected_violating_pairs"].as_f64().unwrap();
    assert!((total - expected).abs() <= 3.0 * expected.sqrt() + 1.0);
}

#[test]
fn nearset_csv_has_one_row_per_seed() {
    let out = qfp(&["nearset", "--n", "4", "--delta", "0.5", "--seeds", "3", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert!(text.lines().next().unwrap().contains("audits.max_abs_overlap"));
}

#[test]
fn nearset_pair_mode() {
    let v = json(&["nearset", "--pair-mode", "--d", "800", "--delta", "0.1", "--pairs", "100000"]);
    let r = &v["result"];
    assert_eq!(r["within_bound"], true);
    assert!(r["violation_rate"].as_f64().unwrap() <= 0.0366 + r["slack"].as_f64().unwrap());
}

#[test]
fn nearset_delta_out_of_range() {
    assert_eq!(code_of(&qfp(&["nearset", "--delta", "1.5"])), 2);
    assert_eq!(code_of(&qfp(&["nearset", "--pair-mode", "--d", "10", "--delta", "1.5"])), 2);
    assert_eq!(code_of(&qfp(&["nearset", "--pair-mode"])), 2);
}

#[test]
fn codes_certificates() {
    let v = json(&["codes", "--n", "5", "--exhaustive"]);
    let r = &v["result"];
    assert_eq!(r["certificate"]["max_agreement"], "1/2");
    assert_eq!(r["exhaustive_certificate"]["min_distance"], 16);
    let v = json(&["codes", "--code", "random-linear", "--n", "6", "--c", "8", "--code-seed", "3"]);
    assert_eq!(v["result"]["m"], 48);
    assert_eq!(v["result"]["code"]["seed"], 3);
}

#[test]
fn table_format_lists_keys() {
    let out = qfp(&["codes", "--n", "3", "--format", "table"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("result.certificate.min_distance") && l.ends_with('4')));
}

#[test]
fn identical_configs_identical_stdout() {
    let args = ["swap-test", "--states", "random", "--dim", "16", "--trials", "5000", "--seed", "9"];
    assert_eq!(qfp(&args).stdout, qfp(&args).stdout);
    let other = qfp(&["swap-test", "--states", "random", "--dim", "16", "--trials", "5000", "--seed", "10"]);
    assert_ne!(qfp(&args).stdout, other.stdout);
}
