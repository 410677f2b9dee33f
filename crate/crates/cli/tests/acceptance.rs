//! Acceptance suite: runs every verification criterion at its stated
//! tolerance (everything here is exact, so the tolerances are equalities and
//! the stated wall-clock budgets) and prints one pass/fail line per
//! criterion.  The CLI-determinism criterion drives the built binary twice
//! and byte-compares the outputs.

use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use spin6_core::verify::{self, CheckResult};

const BUDGET: u128 = 1 << 40;

struct Criterion {
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Vec<CheckResult>,
}

fn report(name: &str, ok: bool, passed: u64, failed: u64, elapsed: Duration, details: &[String]) -> bool {
    println!(
        "[{}] {:<68} {} checks, {} failures, {:.2?}",
        if ok { "PASS" } else { "FAIL" },
        name,
        passed,
        failed,
        elapsed
    );
    for d in details {
        println!("       note: {d}");
    }
    ok
}

fn run_criterion(c: &Criterion) -> bool {
    let start = Instant::now();
    let results = (c.run)();
    let elapsed = start.elapsed();
    let passed: u64 = results.iter().map(|r| r.passed).sum();
    let failed: u64 = results.iter().map(|r| r.failed).sum();
    let mut ok = failed == 0;
    let mut details: Vec<String> = results.iter().flat_map(|r| r.details.clone()).collect();
    if let Some(limit) = c.limit {
        if elapsed > limit {
            ok = false;
            details.push(format!("time limit exceeded: {elapsed:.2?} > {limit:.2?}"));
        }
    }
    report(c.name, ok, passed, failed, elapsed, &details)
}

#[test]
fn acceptance() {
    let criteria: Vec<Criterion> = vec![
        Criterion {
            name: "1. Jordan identity suite (500 rational + 100 Gaussian matrices)",
            limit: Some(Duration::from_secs(2)),
            run: || vec![verify::check_jordan()],
        },
        Criterion {
            name: "2. Group-module suite (100 embedded GSp6 + n, nbar, iota, w_M)",
            limit: Some(Duration::from_secs(10)),
            run: || vec![verify::check_group_module()],
        },
        Criterion {
            name: "3. Cocycle, j = nu^-2 det(Cz+D), w_M table",
            limit: None,
            run: || vec![verify::check_cocycle_and_jfactor()],
        },
        Criterion {
            name: "4. Character-sum census over B0/l^m at good primes",
            limit: Some(Duration::from_secs(5)),
            run: || vec![verify::check_lem1(BUDGET)],
        },
        Criterion {
            name: "5. Local closed forms vs brute-force oracle (ranks 1-3)",
            limit: Some(Duration::from_secs(30)),
            run: || vec![verify::check_local_closed_forms(BUDGET)],
        },
        Criterion {
            name: "6. Kernel and bridge rationality over Q(chi) (21 combinations)",
            limit: None,
            run: || vec![verify::check_kernel_rationality()],
        },
        Criterion {
            name: "7. Bernoulli ratios: two routes agree, ratio = -B_2k/(4k)",
            limit: None,
            run: || vec![verify::check_bernoulli_ratios()],
        },
        Criterion {
            name: "8. Restriction fibers: enumerator = box search, symmetrization, psd",
            limit: Some(Duration::from_secs(5)),
            run: || vec![verify::check_restriction_fibers()],
        },
        Criterion {
            name: "9. L-series: Euler factors, HNF counts, spin gamma, psi, L_M",
            limit: None,
            run: || vec![verify::check_lseries()],
        },
    ];
    let mut all_ok = true;
    for c in &criteria {
        all_ok &= run_criterion(c);
    }
    all_ok &= run_criterion(&Criterion {
        name: "10. CLI determinism and canonical round-trips",
        limit: None,
        run: cli_determinism,
    });
    assert!(all_ok, "acceptance criteria failed");
}

fn binary() -> &'static str {
    env!("CARGO_BIN_EXE_spin6")
}

fn run_cli(args: &[&str]) -> (String, i32) {
    let out = Command::new(binary()).args(args).output().expect("binary runs");
    (
        String::from_utf8(out.stdout).expect("utf8"),
        out.status.code().unwrap_or(-1),
    )
}

fn cli_determinism() -> Vec<CheckResult> {
    let mut r = CheckResult {
        name: "cli determinism".into(),
        passed: 0,
        failed: 0,
        details: Vec::new(),
    };
    let mut check = |ok: bool, msg: &str| {
        if ok {
            r.passed += 1;
        } else {
            r.failed += 1;
            r.details.push(msg.to_string());
        }
    };
    let dir = std::env::temp_dir().join("spin6-acceptance");
    std::fs::create_dir_all(&dir).expect("temp dir");
    let h_path = dir.join("h.json");
    write!(
        std::fs::File::create(&h_path).unwrap(),
        r#"{{"diag": ["2", "1", "0"], "offdiag": [["0","0","0","0"],["0","0","0","0"],["0","0","0","0"]]}}"#
    )
    .unwrap();
    let hp = h_path.to_str().unwrap();
    let exp_path = dir.join("expansion.json");
    write!(
        std::fs::File::create(&exp_path).unwrap(),
        r#"{{"2/4,1,0,0,0,0,0,0,0,0,0,0,0,0,0": "6/4", "0,0,0,0,0,0,0,0,0,0,0,0,0,0,0": "1"}}"#
    )
    .unwrap();
    let ep = exp_path.to_str().unwrap();
    // documented subcommand examples, each run twice and byte-compared
    let cases: Vec<Vec<&str>> = vec![
        vec!["bernoulli", "--n", "12"],
        vec!["local-factor", "--rank", "1", "--ell", "2", "--vals", "2", "--r", "6", "--char", "trivial"],
        vec!["local-factor", "--rank", "3", "--ell", "2", "--vals", "0,0,1", "--r", "6", "--char", "mod4"],
        vec!["euler-factor", "--satake", "1,1,1,1"],
        vec!["spin-gamma", "--s", "4", "--r", "6"],
        vec!["l-correction", "--level", "6", "--s", "1"],
        vec!["psi", "--lambda", "1/5", "--level", "5"],
        vec!["kernel-coeff", "--h", hp, "--r", "6", "--char", "trivial"],
        vec!["oracle-sum", "--rank", "2", "--ell", "3", "--m", "1", "--h", hp],
        vec!["roundtrip", "--expansion", ep],
    ];
    for args in &cases {
        let (a, code_a) = run_cli(args);
        let (b, code_b) = run_cli(args);
        check(code_a == 0 && code_b == 0, &format!("{args:?} exited nonzero"));
        check(a == b, &format!("{args:?} not byte-identical across runs"));
        check(!a.is_empty(), &format!("{args:?} produced no output"));
    }
    // pinned example values
    let (out, _) = run_cli(&["bernoulli", "--n", "12"]);
    check(out.contains("\"-691/2730\""), "bernoulli --n 12 value");
    let (out, _) = run_cli(&["local-factor", "--rank", "1", "--ell", "2", "--vals", "2", "--r", "6", "--char", "trivial"]);
    check(out.contains("1 + 2u + 4u^2"), "rank-1 polynomial rendering");
    check(out.contains("\"1/4096\""), "u = 2^-12");
    // canonical idempotence of the round-trip (unreduced inputs canonicalize)
    let (once, code) = run_cli(&["roundtrip", "--expansion", ep]);
    check(code == 0, "roundtrip exit");
    check(once.contains("\"3/2\""), "roundtrip reduces 6/4 to 3/2");
    check(once.contains("1/2,1,0"), "roundtrip reduces 2/4 in keys");
    let canon_path = dir.join("canon.json");
    std::fs::write(&canon_path, &once).unwrap();
    let (twice, _) = run_cli(&["roundtrip", "--expansion", canon_path.to_str().unwrap()]);
    check(once == twice, "roundtrip is canonical-idempotent");
    // error surface: unknown command exits 2 (usage), domain error exits 1
    let status = Command::new(binary())
        .args(["no-such-command"])
        .output()
        .expect("binary runs");
    check(status.status.code() == Some(2), "usage errors exit 2");
    let (err_out, err_code) = run_cli(&["l-correction", "--level", "4", "--s", "1"]);
    check(err_code == 1, "domain errors exit 1");
    check(err_out.contains("not_squarefree"), "machine-readable error code");
    r.details.push(format!("binary: {}", binary()));
    vec![r]
}
