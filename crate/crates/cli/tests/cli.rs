use serde_json::Value;
use std::process::{Command, Output};

fn isorabi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_isorabi"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn f(v: &Value) -> f64 {
    v.as_str().expect("numbers are strings").parse().unwrap()
}

#[test]
fn spectrum_csv_with_oracle() {
    let out = isorabi(&[
        "spectrum",
        "--g",
        "0.2",
        "--delta",
        "0.5",
        "--levels",
        "4",
        "--with-oracle",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "n,sigma,E,s_re,s_im,residual,oracle_E,abs_err,converged"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 4);
    for row in rows {
        let cells: Vec<&str> = row.split(',').collect();
        assert_eq!(cells.len(), 9);
        let err: f64 = cells[7].parse().unwrap();
        assert!(err < 1e-5, "{row}");
        assert_eq!(cells[8], "true");
    }
}

#[test]
fn spectrum_decoupled() {
    let out = isorabi(&["spectrum", "--g", "0.3", "--delta", "0", "--levels", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["command"], "spectrum");
    let res = doc["results"].as_array().unwrap();
    assert_eq!(res.len(), 3);
    for (m, r) in res.iter().enumerate() {
        assert!((f(&r["E"]) - (m as f64 - 0.09)).abs() < 1e-12);
    }
}

#[test]
fn missing_flag_is_usage_error() {
    let out = isorabi(&["spectrum", "--delta", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
}

#[test]
fn invalid_value_is_usage_error() {
    let out = isorabi(&["spectrum", "--g", "-0.2", "--delta", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oracle_uncoupled() {
    let out = isorabi(&["oracle", "--g", "0", "--delta", "0.4", "--levels", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let got: Vec<f64> = doc["results"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| f(&r["E"]))
        .collect();
    let want = [-0.4, 0.4, 0.6, 1.4, 1.6];
    assert_eq!(got.len(), 5);
    for (a, b) in got.iter().zip(want) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn tau_reports_three_values_and_self_check() {
    let out = isorabi(&[
        "tau",
        "--theta0",
        "0.8",
        "--thetat",
        "0.8",
        "--thetainf",
        "0",
        "--sigma",
        "2.2",
        "--s",
        "0.5",
        "--t",
        "-0.16",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let r = &doc["results"][0];
    for key in ["tau_tilde", "dlog_tau", "d2log_tau"] {
        assert!(f(&r[key]["re"]).is_finite() && f(&r[key]["im"]).is_finite());
    }
    let checks = doc["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 2);
    assert!(checks.iter().all(|c| c["passed"] == true));
}

#[test]
fn monodromy_at_oracle_root() {
    let out = isorabi(&["oracle", "--g", "0.2", "--delta", "0.4", "--levels", "1"]);
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let e = doc["results"][0]["E"].as_str().unwrap().to_string();
    let out = isorabi(&["monodromy", "--g", "0.2", "--delta", "0.4", "--E", &e]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(f(&doc["results"][0]["connection_offdiag_abs"]) < 1e-6);
}

#[test]
fn validate_single_family() {
    let out = isorabi(&["validate", "--only", "schlesinger"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let checks = doc["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 1);
    assert_eq!(checks[0]["name"], "schlesinger");
}

#[test]
fn validate_default_grid_passes() {
    let out = isorabi(&["validate"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["checks"].as_array().unwrap().len(), 10);
}

#[test]
fn corrupted_sigma_fails_monodromy_check() {
    let out = isorabi(&["validate", "--only", "monodromy", "--sigma-offset", "0.01"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("monodromy"));
}

#[test]
fn json_numbers_round_trip() {
    let out = isorabi(&["spectrum", "--g", "0.1", "--delta", "0.7", "--levels", "2"]);
    let text = stdout(&out);
    let doc: Value = serde_json::from_str(&text).unwrap();
    let again = serde_json::to_string_pretty(&doc).unwrap();
    assert_eq!(again.trim_end(), text.trim_end());
    for r in doc["results"].as_array().unwrap() {
        let s = r["E"].as_str().unwrap();
        let x: f64 = s.parse().unwrap();
        assert_eq!(format!("{x:.16e}"), s);
    }
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("isorabi-cli-{}.csv", std::process::id()));
    let out = isorabi(&[
        "oracle",
        "--g",
        "0.1",
        "--delta",
        "0.2",
        "--levels",
        "3",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn env_override_applies() {
    let out = Command::new(env!("CARGO_BIN_EXE_isorabi"))
        .args(["spectrum", "--g", "0.2", "--delta", "0.5", "--levels", "1"])
        .env("RABI_TOL", "-1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
