use std::path::Path;
use std::process::{Command, Output};

fn hjlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hjlab"))
        .args(args)
        .output()
        .unwrap()
}

fn run_into(scenario: &str, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["run", scenario, "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    hjlab(&args)
}

#[test]
fn bundled_shock_scenario_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_into(
        "burgers-shock",
        dir.path(),
        &["--assert", "ordering", "--assert", "entropy-pass"],
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    for f in [
        "fields_t1.csv",
        "ordering_report.json",
        "entropy_report.json",
    ] {
        assert!(dir.path().join(f).exists(), "missing {f}");
    }
    let report: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("ordering_report.json")).unwrap(),
    )
    .unwrap();
    assert!(report.as_array().is_some_and(|a| !a.is_empty()));
}

#[test]
fn failed_assertion_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_into(
        "anti-burgers-rarefaction",
        dir.path(),
        &["--assert", "entropy-pass"],
    );
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn malformed_config_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("broken.toml");
    std::fs::write(&cfg, "name = \"broken\"\ntimes = [1.0]\n[hamiltonian]\nid = \"quadratic\"\n[initial]\nid = \"neg-abs\"\n")
        .unwrap();
    let out = run_into(cfg.to_str().unwrap(), &dir.path().join("out"), &[]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(hjlab(&["run", "no-such-scenario"]).status.code(), Some(2));
    assert_eq!(hjlab(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn solver_failure_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("unstable.toml");
    std::fs::write(
        &cfg,
        "name = \"unstable\"\ntimes = [1.0]\n[hamiltonian]\nid = \"poly:1e13\"\n[initial]\nid = \"neg-abs\"\n\
         [grid]\naxes = [{ min = -1.0, max = 1.0, count = 21 }]\n[solvers]\nrun = [\"fd-oracle\"]\n",
    )
    .unwrap();
    let out = run_into(cfg.to_str().unwrap(), &dir.path().join("out"), &[]);
    assert_eq!(
        out.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn list_is_sorted_and_complete() {
    let out = hjlab(&["list"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let section = |name: &str| -> Vec<String> {
        text.split(&format!("{name}:\n"))
            .nth(1)
            .unwrap()
            .lines()
            .take_while(|l| l.starts_with(' '))
            .map(|l| l.split_whitespace().next().unwrap().to_string())
            .collect()
    };
    let hs = section("hamiltonians");
    let mut sorted = hs.clone();
    sorted.sort();
    assert_eq!(hs, sorted);
    for id in ["quadratic", "neg-quadratic"] {
        assert!(hs.iter().any(|h| h == id));
    }
    assert!(section("initial conditions").iter().any(|i| i == "neg-abs"));
    assert!(section("scenarios").iter().any(|s| s == "burgers-shock"));
}

#[test]
fn csv_output_is_deterministic() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    assert!(run_into("concave-quadratic", a.path(), &[])
        .status
        .success());
    assert!(run_into("concave-quadratic", b.path(), &[])
        .status
        .success());
    for f in ["fields_t0.25.csv", "fields_t0.5.csv"] {
        let x = std::fs::read(a.path().join(f)).unwrap();
        assert_eq!(x, std::fs::read(b.path().join(f)).unwrap(), "{f} differs");
    }
}

#[test]
fn every_bundled_scenario_finishes_within_a_minute() {
    for name in hjlab::scenario::bundled_names() {
        let dir = tempfile::tempdir().unwrap();
        let start = std::time::Instant::now();
        let out = run_into(name, dir.path(), &[]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{name}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(
            start.elapsed().as_secs() < 60,
            "{name} took {:?}",
            start.elapsed()
        );
    }
}
