use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qdeform")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = run(args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    stdout(&o)
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&ok(args)).unwrap()
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

#[test]
fn qnum_one_is_one() {
    let out = ok(&["qnum", "--n", "1", "--k", "5"]);
    assert_eq!(out.trim(), "1.0000000000000000");
    assert_eq!(out.trim().parse::<f64>().unwrap(), 1.0);
    let v = json(&["qnum", "--n", "2", "--k", "1", "--format", "json"]);
    assert!((f(&v["value"]) - 1.0).abs() < 1e-15);
    let csv = ok(&["qnum", "--n", "-3", "--k", "4", "--format", "csv"]);
    assert!(csv.starts_with("k,n,value\n4,-3,"), "{csv}");
}

#[test]
fn fsymbol_value() {
    // [1/2 1/2 0; 1/2 1/2 1] = 1 / sqrt(2) at k = 2
    let out = ok(&["fsymbol", "--k", "2", "1/2", "1/2", "0", "1/2", "1/2", "1"]);
    assert!((out.trim().parse::<f64>().unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
}

#[test]
fn physdim_csv() {
    let out = ok(&["physdim", "--kmax", "100", "--format", "csv"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "k,dim_q,dim_nq,ratio");
    assert_eq!(lines.len(), 101);
    assert!(lines[1].starts_with("1,16,"), "{}", lines[1]);
    let ratios: Vec<f64> = lines[1..].iter().map(|l| l.rsplit(',').next().unwrap().parse().unwrap()).collect();
    let last = *ratios.last().unwrap();
    // approaches the 0.2563 asymptote from above as ~1/k
    assert!(last > 0.2563 && last < 0.2563 + 0.0115, "{last}");
    assert!(ratios.windows(2).skip(10).all(|w| w[1] < w[0]));
    let digits = lines[100].rsplit(',').next().unwrap().trim_start_matches("0.").len();
    assert_eq!(digits, 17);
}

#[test]
fn resources_contains_known_counts() {
    let out = ok(&["resources", "--kmax", "8", "--format", "csv"]);
    let rows: Vec<&str> = out.lines().collect();
    assert_eq!(rows[0], "k,scheme,gcx");
    for want in ["1,reduced,306", "1,nondeformed,62", "1,baseline,390", "1,parity-k1,48", "2,reduced,1202"] {
        assert!(rows.contains(&want), "missing {want}");
    }
    assert_eq!(rows.len(), 1 + 8 * 3 + 1);
    let v = json(&["resources", "--k", "1", "--format", "json"]);
    let reduced = v.as_array().unwrap().iter().find(|r| r["scheme"] == "reduced").unwrap();
    assert_eq!(reduced["gcx"].as_u64(), Some(306));
    assert_eq!(reduced["centering_overhead"].as_u64(), Some(20));
}

#[test]
fn operator_sectors() {
    let v = json(&["operator", "--k", "2"]);
    let sectors = v["sectors"].as_array().unwrap();
    assert_eq!(sectors.len(), 2);
    let diag: Vec<f64> = sectors[0]["diagonal"].as_array().unwrap().iter().map(f).collect();
    for (got, want) in diag.iter().zip([2f64.sqrt(), 0.0, -(2f64.sqrt())]) {
        assert!((got - want).abs() < 1e-12);
    }
    assert!((f(&sectors[0]["matrix"][0][1][1]) - 1.0).abs() < 1e-12);
    let one = json(&["operator", "--k", "1", "--control", "1/2"]);
    assert!(one["sectors"][0].get("spectrum").is_none());
}

#[test]
fn synth_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("step.qc");
    let p = path.to_str().unwrap();
    for (k, tau, scheme) in [("1", "0.3", "reduced"), ("1", "-0.7", "parity-k1"), ("2", "0.2", "baseline")] {
        let summary = json(&["synth", "--k", k, "--tau", tau, "--scheme", scheme, "--out", p]);
        let fresh = json(&["simulate", "--k", k, "--tau", tau, "--scheme", scheme]);
        let parsed = json(&["simulate", "--k", k, "--tau", tau, "--scheme", scheme, "--circuit", p]);
        for key in ["max_deviation", "aux_leakage", "unphysical_leakage", "columns", "gcx"] {
            assert_eq!(fresh[key], parsed[key], "{scheme} {key}");
        }
        assert_eq!(summary["gcx"], parsed["gcx"]);
        assert!(f(&parsed["max_deviation"]) < 1e-12);
        assert_eq!(f(&parsed["aux_leakage"]), 0.0);
    }
    let text = ok(&["synth", "--k", "1", "--tau", "0.3", "--scheme", "parity-k1"]);
    assert!(text.starts_with("QDEFCIRC 1\nREGS 2 2 2 2 2 2 2 2 5\n"));
    assert_eq!(text.lines().filter(|l| l.starts_with("GCX")).count(), 48);
}

#[test]
fn simulate_detects_wrong_angle() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("step.qc");
    let p = path.to_str().unwrap();
    ok(&["synth", "--k", "1", "--tau", "0.3", "--out", p]);
    let o = run(&["simulate", "--k", "1", "--tau", "0.35", "--circuit", p]);
    assert_eq!(o.status.code(), Some(1));
    let report: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(report["status"], "fail");
    assert!(f(&report["result"]["max_deviation"]) > 1e-3);
}

#[test]
fn simulate_rejects_bad_circuit_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.qc");
    std::fs::write(&path, "QDEFCIRC 1\nREGS 2 2 2 2 2 2 2 2 5\nSWAP t=0\n").unwrap();
    let o = run(&["simulate", "--k", "1", "--tau", "0.3", "--circuit", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let report: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert!(report["error"].as_str().unwrap().contains("line 3"));
    // layout for the wrong truncation
    let o = run(&["simulate", "--k", "2", "--tau", "0.3", "--circuit", dir.path().join("bad.qc").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_default_passes() {
    let out = ok(&["verify"]);
    let rows: Vec<Vec<&str>> = out.lines().map(|l| l.split(',').collect()).collect();
    assert_eq!(rows[0], ["suite", "check", "status", "max_dev"]);
    let suites: std::collections::BTreeSet<&str> = rows[1..].iter().map(|r| r[0]).collect();
    assert_eq!(suites.len(), 6);
    assert!(rows[1..].iter().all(|r| r[2] == "pass"), "{out}");
}

#[test]
fn verify_skips_past_guards() {
    let v = json(&["verify", "--plaquette", "--gauge", "--kmax", "7", "--format", "json"]);
    let checks = v.as_array().unwrap();
    assert!(checks.iter().all(|c| c["suite"] == "plaquette" || c["suite"] == "gauge"));
    let skipped: Vec<&Value> = checks.iter().filter(|c| c["status"] == "skipped").collect();
    assert!(skipped.iter().any(|c| c["check"] == "f-sequence k=4"));
    assert!(skipped.iter().any(|c| c["check"] == "enumeration deformed k=7"));
    assert!(skipped.iter().all(|c| c["max_dev"].is_null()));
    assert!(checks.iter().any(|c| c["check"] == "closed form k=7" && c["status"] == "pass"));
}

#[test]
fn verify_samples_pentagon_above_exhaustive_limit() {
    let v = json(&["verify", "--qalgebra", "--kmax", "5", "--samples", "500", "--seed", "7", "--format", "json"]);
    let sampled = v.as_array().unwrap().iter().find(|c| c["check"] == "pentagon sampled k=5 n=500").unwrap();
    assert_eq!(sampled["status"], "pass");
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["bogus"][..],
        &["qnum", "--n", "1"],
        &["qnum", "--n", "1", "--k", "5", "--frobnicate"],
        &["qnum", "--n", "1", "--k", "-1"],
        &["synth", "--k", "0", "--tau", "0.1"],
        &["synth", "--k", "2", "--tau", "0.1", "--scheme", "parity-k1"],
        &["synth", "--k", "1", "--tau", "0.1", "--scheme", "nondeformed"],
        &["synth", "--k", "1", "--tau", "0.1", "--scheme", "fancy"],
        &["simulate", "--k", "9", "--tau", "0.1"],
        &["physdim"],
        &["physdim", "--kmin", "5", "--kmax", "2"],
        &["fsymbol", "--k", "1", "1", "0", "1", "0", "0", "0"],
        &["operator", "--k", "1", "--control", "1/3"],
        &["verify", "--kmax", "0"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8_lossy(&o.stderr);
        assert!(err.contains("Usage:") || err.contains("--help"), "{args:?}: {err}");
        assert!(o.stdout.is_empty());
    }
}
