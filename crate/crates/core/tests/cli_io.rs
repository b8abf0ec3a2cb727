//! End-to-end checks of the permspec binary: flag parsing, JSON/CSV output
//! shapes, exit codes, and byte-identical reruns of exact pipelines.

use serde_json::Value;
use std::process::Command;

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_permspec"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn run_json(args: &[&str]) -> Value {
    let (code, stdout, stderr) = run(args);
    assert_eq!(code, 0, "command {args:?} failed: {stderr}");
    serde_json::from_str(&stdout).expect("stdout is JSON")
}

#[test]
fn expect_word_symbolic_shape() {
    let doc = run_json(&["expect-word", "--word", "aa", "--symbolic"]);
    assert_eq!(doc["tool"], "permspec");
    assert_eq!(doc["version"], env!("CARGO_PKG_VERSION"));
    let sym = &doc["result"]["symbolic"];
    assert_eq!(sym["numerator"], serde_json::json!(["0", "1"]));
    assert_eq!(sym["denominator_factors"].as_array().unwrap().len(), 0);
}

#[test]
fn expect_word_identity_convention() {
    let doc = run_json(&["expect-word", "--word", "aA", "--symbolic", "--at", "4"]);
    let sym = &doc["result"]["symbolic"];
    assert_eq!(sym["numerator"], serde_json::json!(["1", "-1"]));
    assert_eq!(doc["result"]["values"][0]["value"]["exact"], "3/4");
}

#[test]
fn expect_word_oracle_values() {
    let doc = run_json(&[
        "expect-word", "--word", "abAB", "--at", "2", "--at", "4", "--brute-force",
    ]);
    for v in doc["result"]["values"].as_array().unwrap() {
        assert_eq!(v["oracle_match"], serde_json::json!(true));
    }
}

#[test]
fn expect_poly_and_nu() {
    let doc = run_json(&[
        "expect-poly", "--poly", "adjacency", "--d", "2", "--h", "0,0,1", "--symbolic",
    ]);
    // Ψ for h = x² is identically 4.
    assert_eq!(doc["result"]["symbolic"]["numerator"], serde_json::json!(["4"]));

    let doc = run_json(&[
        "nu", "--poly", "adjacency", "--d", "2", "--order", "1", "--pmax", "3",
    ]);
    let rows = doc["result"]["rows"].as_array().unwrap();
    assert_eq!(rows[1]["nu1"], "0");
    assert_eq!(rows[2]["nu1"], "4");
    assert_eq!(rows[2]["routes_agree"], serde_json::json!(true));
}

#[test]
fn limit_moments_rows() {
    let doc = run_json(&["limit-moments", "--poly", "adjacency", "--d", "2", "--pmax", "4"]);
    let rows = doc["result"]["rows"].as_array().unwrap();
    assert_eq!(rows[2]["moment"]["exact"], "4");
    assert_eq!(rows[4]["moment"]["exact"], "28");
    assert!(doc["result"]["norm_estimate"]["lower_bound"].as_f64().unwrap() >= 2.0);
}

#[test]
fn support_and_cheb_and_markov() {
    let doc = run_json(&[
        "support", "--poly", "adjacency", "--d", "2", "--order", "1", "--pmax", "6",
    ]);
    assert_eq!(doc["result"]["within"], serde_json::json!(true));

    let doc = run_json(&["cheb", "--h", "0,0,1", "--K", "3"]);
    assert_eq!(
        doc["result"]["coefficients"],
        serde_json::json!(["9/2", "0", "9/2"])
    );
    assert_eq!(doc["result"]["round_trip_exact"], serde_json::json!(true));

    let doc = run_json(&["markov-check", "--h", "0,1", "--a", "1", "--m", "1"]);
    assert_eq!(doc["result"]["markov"]["pass"], serde_json::json!(true));
}

#[test]
fn testfn_invariants_via_cli() {
    let doc = run_json(&[
        "testfn", "--rho", "3.4641", "--eps", "0.5", "--K", "4", "--m", "8",
    ]);
    assert_eq!(doc["result"]["monotone"], serde_json::json!(true));
    assert_eq!(doc["result"]["in_range"], serde_json::json!(true));
    assert_eq!(doc["result"]["chi_at_zero"], serde_json::json!(0.0));
}

#[test]
fn certificate_precondition_exit_code() {
    let (code, _, stderr) = run(&["certificate", "--d", "2", "--eps", "3", "--N", "100"]);
    assert_eq!(code, 2, "stderr: {stderr}");
    assert!(stderr.contains("ε must lie in"));
    let doc = run_json(&["certificate", "--d", "2", "--eps", "0.5", "--N", "1000000"]);
    assert!(doc["result"]["bound"].as_f64().unwrap() > 0.0);
    assert_eq!(doc["result"]["up_to_universal_constant"], serde_json::json!(true));
}

#[test]
fn staircase_regime_exit_code() {
    let (code, _, stderr) =
        run(&["staircase", "--d", "13", "--m", "2", "--N", "100", "--trials", "1"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("bulk regime"));
}

#[test]
fn simulate_writes_csv_and_is_reproducible() {
    let csv_path = std::env::temp_dir().join(format!("permspec_tails_{}.csv", std::process::id()));
    let csv = csv_path.to_str().unwrap();
    let args =
        ["simulate", "--d", "2", "--N", "120", "--trials", "3", "--eps", "0.3", "--seed", "9",
         "--out", csv];
    let doc = run_json(&args);
    assert_eq!(doc["result"]["trials"], 3);
    assert!(doc["result"]["lambda2_quantiles"]["median"].as_f64().unwrap() > 2.0);
    let body = std::fs::read_to_string(&csv_path).unwrap();
    assert!(body.starts_with("# config:"));
    assert!(body.lines().nth(1).unwrap().starts_with("trial,lambda2"));
    assert_eq!(body.lines().count(), 5); // config + header + 3 rows

    // Byte-identical rerun, including with a different worker count.
    let (_, first, _) = run(&args);
    let out2 = Command::new(env!("CARGO_BIN_EXE_permspec"))
        .args(args)
        .env("WORKERS", "1")
        .output()
        .unwrap();
    assert_eq!(first, String::from_utf8_lossy(&out2.stdout));
    std::fs::remove_file(&csv_path).ok();
}

#[test]
fn weak_probe_slope() {
    let doc = run_json(&[
        "weak-probe", "--poly", "adjacency", "--d", "2", "--h", "0,0,0,0,1",
        "--n-grid", "50,100,200,400,800", "--trials", "3", "--seed", "2",
    ]);
    let slope = doc["result"]["slope"].as_f64().unwrap();
    assert!((-2.3..=-1.7).contains(&slope), "slope = {slope}");
}

#[test]
fn seed_env_override() {
    let args = ["simulate", "--d", "2", "--N", "80", "--trials", "2", "--seed", "1"];
    let base = run_json(&args);
    let out = Command::new(env!("CARGO_BIN_EXE_permspec"))
        .args(args)
        .env("SEED", "999")
        .output()
        .unwrap();
    let overridden: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_ne!(
        base["result"]["rows"][0]["lambda2"],
        overridden["result"]["rows"][0]["lambda2"]
    );
}

#[test]
fn selftest_green() {
    let (code, stdout, _) = run(&["selftest"]);
    assert_eq!(code, 0);
    let doc: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(doc["result"]["all_pass"], serde_json::json!(true));
}

#[test]
fn usage_error_exit_code() {
    let (code, _, _) = run(&["expect-word"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["no-such-command"]);
    assert_eq!(code, 2);
}

#[test]
fn budget_error_exit_code() {
    let (code, _, stderr) = run(&[
        "expect-word",
        "--word",
        "aaaaaaaaaaaaaaaaaaaa",
        "--symbolic",
    ]);
    assert_eq!(code, 3, "stderr: {stderr}");
    assert!(stderr.contains("cap"));
}
