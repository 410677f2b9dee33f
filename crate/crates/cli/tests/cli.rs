//! CLI surface tests: dispatch, config handling, error codes.

use std::process::Command;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_spin6")
}

#[test]
fn verify_subcommand_reports_summary() {
    let out = Command::new(bin())
        .args(["verify", "--suite", "bernoulli"])
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).expect("json");
    assert_eq!(v["failed"], 0);
    assert!(v["passed"].as_u64().unwrap() > 0);
}

#[test]
fn unknown_suite_is_a_domain_error() {
    let out = Command::new(bin())
        .args(["verify", "--suite", "nonsense"])
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).expect("json");
    assert_eq!(v["code"], "invalid_input");
}

#[test]
fn config_with_wrong_discriminant_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("config.json");
    std::fs::write(
        &path,
        r#"{
            "algebra": {
                "a": "-1", "b": "-1", "D_B": 3,
                "order_basis": [["1","0","0","0"],["0","1","0","0"],["0","0","1","0"],["1/2","1/2","1/2","1/2"]]
            }
        }"#,
    )
    .unwrap();
    let out = Command::new(bin())
        .args(["--config", path.to_str().unwrap(), "bernoulli", "--n", "2"])
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).expect("json");
    assert!(v["message"].as_str().unwrap().contains("discriminant"));
}

#[test]
fn config_selects_the_algebra() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("config.json");
    // the order of B(-1,-3), good at 2
    std::fs::write(
        &path,
        r#"{
            "algebra": {
                "a": "-1", "b": "-3", "D_B": 3,
                "order_basis": [["1","0","0","0"],["0","1","0","0"],["1/2","0","1/2","0"],["0","1/2","0","1/2"]]
            }
        }"#,
    )
    .unwrap();
    let h = dir.path().join("h.json");
    std::fs::write(
        &h,
        r#"{"diag": ["1", "1", "0"], "offdiag": [["0","0","0","0"],["0","0","0","0"],["0","0","0","0"]]}"#,
    )
    .unwrap();
    // rank-2 interior sum at the good prime 2: I_1 = -4
    let out = Command::new(bin())
        .args([
            "--config",
            path.to_str().unwrap(),
            "oracle-sum",
            "--rank",
            "2",
            "--ell",
            "2",
            "--m",
            "1",
            "--h",
            h.to_str().unwrap(),
        ])
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).expect("json");
    assert_eq!(v["value"], "-4");
}

#[test]
fn budget_env_override() {
    let dir = tempfile::tempdir().unwrap();
    let h = dir.path().join("h.json");
    std::fs::write(
        &h,
        r#"{"diag": ["1", "1", "1"], "offdiag": [["0","0","0","0"],["0","0","0","0"],["0","0","0","0"]]}"#,
    )
    .unwrap();
    let out = Command::new(bin())
        .env("SPIN6_BUDGET", "10")
        .args(["oracle-sum", "--rank", "3", "--ell", "2", "--m", "1", "--h", h.to_str().unwrap()])
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).expect("json");
    assert_eq!(v["code"], "budget_exceeded");
}

#[test]
fn jfactor_atkin_lehner() {
    let dir = tempfile::tempdir().unwrap();
    let z = dir.path().join("z.json");
    // Z = i * 1_3: N(Z) = i^3 = -i, so j(w_2, Z) = -N(Z)/8 = i/8
    std::fs::write(
        &z,
        r#"{
            "re": {"diag": ["0","0","0"], "offdiag": [["0","0","0","0"],["0","0","0","0"],["0","0","0","0"]]},
            "im": {"diag": ["1","1","1"], "offdiag": [["0","0","0","0"],["0","0","0","0"],["0","0","0","0"]]}
        }"#,
    )
    .unwrap();
    let out = Command::new(bin())
        .args(["jfactor", "--element", "wM:2", "--z", z.to_str().unwrap()])
        .output()
        .expect("binary runs");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).expect("json");
    assert_eq!(v["j"]["re"], "0");
    assert_eq!(v["j"]["im"], "1/8");
}
