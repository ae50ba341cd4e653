use assert_cmd::Command;
use serde_json::Value;
use std::fs;

fn kfp() -> Command {
    Command::cargo_bin("kfp").unwrap()
}

fn json_stdout(args: &[&str]) -> Value {
    let out = kfp().args(args).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn elastic_exponent_is_zero() {
    let v = json_stdout(&["exponents", "--r", "1", "--json"]);
    assert!(v["alpha"].as_f64().unwrap().abs() < 1e-12);
    assert!(v["c_star"].is_null());
}

#[test]
fn exponent_table_has_a_header() {
    let out = kfp().args(["exponents", "table", "--from", "0.01", "--to", "1", "--n", "5"]).output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("r,alpha,beta,kappa,c_star"));
    assert_eq!(lines.count(), 5);
}

#[test]
fn cstar_comparison_agrees() {
    let v = json_stdout(&["flux", "cstar", "--r", "0.05", "--compare"]);
    assert!(v["relative_deviation"].as_f64().unwrap() < 1e-4);
    let top = json_stdout(&["cstar", "--r", "0.05", "--compare"]);
    assert_eq!(v["quadrature"], top["quadrature"]);
}

#[test]
fn unknown_flag_is_a_usage_error() {
    kfp().args(["exponents", "--bogus"]).assert().code(2);
    kfp().args(["pde", "run", "--bc", "sticky"]).assert().code(2);
}

#[test]
fn numerical_failure_reports_json() {
    let out = kfp().args(["exponents", "--r", "-1", "--json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(v["error"], "domain");
    let out = kfp().args(["pde", "run", "--bc", "trap", "--r", "0.5"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(v["error"], "config");
}

#[test]
fn hidden_specfun_eval_prints_one_value_per_line() {
    let out = kfp().args(["specfun", "eval", "--func", "U", "--a", "0", "--z", "-3,0.5,4"]).output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    let values: Vec<f64> = text.lines().map(|l| l.parse().unwrap()).collect();
    assert_eq!(values, vec![1.0, 1.0, 1.0]);
    let out = kfp().args(["specfun", "eval", "--func", "lngamma", "--z", "0.5"]).output().unwrap();
    let lg: f64 = String::from_utf8(out.stdout).unwrap().trim().parse().unwrap();
    assert!((lg - std::f64::consts::PI.sqrt().ln()).abs() < 1e-12);
}

#[test]
fn pde_run_writes_series_snapshots_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    kfp()
        .args(["--out", d, "pde", "run", "--bc", "partial:5", "--nx", "60", "--nv", "80", "--tend", "0.05", "--snapshots", "2"])
        .assert()
        .success();
    let series = fs::read_to_string(dir.path().join("mass.csv")).unwrap();
    assert!(series.starts_with("t,interior_mass,m,a_alpha,a_m23\n"));
    for k in 0..=2 {
        let snap = fs::read_to_string(dir.path().join(format!("snapshot_{k:03}.csv"))).unwrap();
        assert!(snap.starts_with("x,v,P\n"));
        assert_eq!(snap.lines().count(), 1 + 60 * 80);
    }
    let m: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(m["command"], "pde run");
    assert_eq!(m["config"]["bc"]["partial_trapping"]["mu_star"], 5.0);
    assert_eq!(m["outputs"].as_array().unwrap().len(), 5);
}

#[test]
fn pde_config_file_is_read_and_overridden() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, r#"{"mode": "strip", "bc": "trapping", "nx": 40, "nv": 60, "vmax": 4.0, "t_end": 0.02}"#).unwrap();
    let out = dir.path().join("out");
    kfp()
        .args(["--out", out.to_str().unwrap(), "pde", "run", "--config", cfg.to_str().unwrap(), "--nv", "40"])
        .assert()
        .success();
    let m: Value = serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(m["config"]["mode"], "strip");
    assert_eq!(m["config"]["nv"], 40);
    let series = fs::read_to_string(out.join("mass.csv")).unwrap();
    assert!(series.starts_with("t,interior_mass,m,a_alpha,a_m23,m_right\n"));
}

#[test]
fn seeded_runs_are_byte_identical() {
    let run = || {
        let dir = tempfile::tempdir().unwrap();
        kfp()
            .args(["--out", dir.path().to_str().unwrap(), "--threads", "2", "sde", "collapse", "--r", "0.1", "--n", "200", "--tmax", "5", "--seed", "9", "--json"])
            .assert()
            .success();
        fs::read(dir.path().join("paths.csv")).unwrap()
    };
    let a = run();
    assert!(String::from_utf8_lossy(&a).starts_with("path,collapsed,t_final,bounces\n"));
    assert_eq!(a, run());
}

#[test]
fn lattice_run_reports_the_comparison() {
    let v = json_stdout(&["lattice", "run", "--lambda", "1", "--h", "0.0078125", "--bc-check", "neumann"]);
    assert!(v["max_error"].as_f64().unwrap() < 5.0 * 0.0078125);
    let v = json_stdout(&["lattice", "run", "--lambda", "1*h", "--bc-check", "dynamic"]);
    assert!(v["lambda"].as_f64().unwrap() > 0.0);
}

#[test]
fn profile_dump_emits_a_grid() {
    let out = kfp().args(["profile", "dump", "--kind", "G", "--gamma", "alpha", "--grid", "3x4"]).output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("x,v,value\n"));
    assert_eq!(text.lines().count(), 13);
}

#[test]
fn single_criterion_reproduces() {
    let dir = tempfile::tempdir().unwrap();
    let out = kfp().args(["--out", dir.path().to_str().unwrap(), "reproduce", "1"]).output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().contains("[PASS]  1 exponent identities"));
    assert!(dir.path().join("criteria.csv").exists());
}
