//! End-to-end runs of the `fho` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fho_cli::verify::ALL_CHECKS;
use serde_json::Value;

fn fho(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fho")).args(args).output().expect("run fho")
}

fn repo() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn scenario(name: &str) -> String {
    repo().join("scenarios").join(name).display().to_string()
}

fn write_scenario(dir: &Path, name: &str, json: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, json).unwrap();
    p.display().to_string()
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    (header, rows)
}

fn column(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"))
}

fn schema(name: &str) -> jsonschema::Validator {
    let text = std::fs::read_to_string(repo().join("schemas").join(name)).unwrap();
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).unwrap()
}

fn exit(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn zero_forcing_has_no_response() {
    let dir = tempfile::tempdir().unwrap();
    let s = write_scenario(dir.path(), "zero.json", r#"{"params":{"m":1.3,"omega":0.8},"forcing":{"type":"zero"}}"#);
    let out = dir.path().join("out");
    let o = fho(&["classical", "--scenario", &s, "--out", out.to_str().unwrap()]);
    assert_eq!(exit(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let (h, rows) = read_csv(&out.join("classical.csv"));
    assert_eq!(h, ["t", "x", "p", "x_nh", "p_nh", "invariant"]);
    assert_eq!(rows.len(), 101);
    for r in &rows {
        assert_eq!(r[column(&h, "x_nh")], 0.0);
        assert_eq!(r[column(&h, "p_nh")], 0.0);
    }
    let (h, _) = read_csv(&out.join("frame.csv"));
    assert_eq!(h, ["t", "x_nh", "xdot_nh", "G"]);

    let o = fho(&["transitions", "--scenario", &s, "--out", out.to_str().unwrap()]);
    assert_eq!(exit(&o), 0);
    let (h, rows) = read_csv(&out.join("transitions.csv"));
    assert_eq!(h, ["t", "n", "m", "P"]);
    for r in &rows {
        assert_eq!(r[3], if r[1] == r[2] { 1.0 } else { 0.0 });
    }
}

#[test]
fn classical_rows_match_library() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path();
    let o = fho(&["classical", "--scenario", &scenario("sinusoid_heavy.json"), "--out", out.to_str().unwrap()]);
    assert_eq!(exit(&o), 0);
    let s = fho_cli::Scenario::load(Path::new(&scenario("sinusoid_heavy.json"))).unwrap();
    let (_, rows) = read_csv(&out.join("classical.csv"));
    for r in rows {
        let z = forced_oscillator::classical::evolve(&s.params, s.initial_state, &s.forcing, r[0], 1e-12).unwrap();
        assert_eq!((r[1], r[2]), (z.x, z.p));
    }
}

#[test]
fn ground_start_rows_are_poisson() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path();
    let o = fho(&["transitions", "--scenario", &scenario("half_period.json"), "--out", out.to_str().unwrap()]);
    assert_eq!(exit(&o), 0);
    let (h, summary) = read_csv(&out.join("transitions_summary.csv"));
    let (lam, surv) = (column(&h, "lambda"), column(&h, "survival"));
    let (_, long) = read_csv(&out.join("transitions.csv"));
    for row in &summary {
        assert!((row[surv] - (-row[lam]).exp()).abs() < 1e-12);
        let mut term = (-row[lam]).exp();
        for r in long.iter().filter(|r| r[0] == row[0]) {
            let m = r[2] as usize;
            if m > 0 {
                term *= row[lam] / m as f64;
            }
            assert!((r[3] - term).abs() < 1e-9);
        }
    }
    let last = summary.last().unwrap();
    assert!((last[surv] - (-2.0f64).exp()).abs() < 1e-9);

    let json: Value = serde_json::from_str(&std::fs::read_to_string(out.join("transition_rows.json")).unwrap()).unwrap();
    assert_eq!(json.as_array().unwrap().len(), summary.len());

    let o = fho(&["survival", "--scenario", &scenario("half_period.json"), "--out", out.to_str().unwrap()]);
    assert_eq!(exit(&o), 0);
    let (h, rows) = read_csv(&out.join("survival.csv"));
    assert_eq!(h, ["t", "lambda", "survival", "ground_survival"]);
    for (r, s) in rows.iter().zip(&summary) {
        assert_eq!(r[2], r[3]);
        assert_eq!(r[2], s[surv]);
    }
}

#[test]
fn evolve_pde_writes_state_and_log() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path();
    let o = fho(&["evolve-pde", "--scenario", &scenario("half_period.json"), "--out", out.to_str().unwrap()]);
    assert_eq!(exit(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let (h, log) = read_csv(&out.join("evolution.csv"));
    assert_eq!(h, ["t", "norm", "energy", "overlap_ground"]);
    for r in &log {
        assert!((r[1] - 1.0).abs() < 1e-10);
    }
    assert!((log.last().unwrap()[3] - (-2.0f64).exp()).abs() < 1e-4);
    let (h, state) = read_csv(&out.join("state_final.csv"));
    assert_eq!(h, ["x", "re", "im", "abs2"]);
    assert_eq!(state.len(), 1024);
}

#[test]
fn verify_all_passes_and_validates() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path();
    let o = fho(&["verify", "--suite", "all", "--out", out.to_str().unwrap()]);
    assert_eq!(exit(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let report: Value = serde_json::from_str(&std::fs::read_to_string(out.join("verify_report.json")).unwrap()).unwrap();
    let v = schema("verify-report.schema.json");
    assert!(v.is_valid(&report), "{:?}", v.iter_errors(&report).map(|e| e.to_string()).collect::<Vec<_>>());
    let checks = report["checks"].as_array().unwrap();
    assert!(checks.len() >= 15);
    assert_eq!(checks.len(), ALL_CHECKS);
    assert!(checks.iter().all(|c| c["status"] == "pass"));
}

#[test]
fn coarse_time_step_fails_covariance_check() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path();
    let o = fho(&["verify", "--suite", "quantum", "--scenario", &scenario("coarse_dt.json"), "--out", out.to_str().unwrap()]);
    assert_eq!(exit(&o), 1);
    let report: Value = serde_json::from_str(&std::fs::read_to_string(out.join("verify_report.json")).unwrap()).unwrap();
    assert!(schema("verify-report.schema.json").is_valid(&report));
    assert_eq!(report["passed"], false);
    let defect = report["checks"].as_array().unwrap().iter().find(|c| c["check"] == "schrodinger.frame_covariance").unwrap();
    assert_eq!(defect["status"], "fail");
    assert!(defect["max_error"].as_f64().unwrap() > 1e-4);
}

#[test]
fn shipped_scenarios_validate() {
    let v = schema("scenario.schema.json");
    for entry in std::fs::read_dir(repo().join("scenarios")).unwrap() {
        let path = entry.unwrap().path();
        let json: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert!(v.is_valid(&json), "{}", path.display());
        fho_cli::Scenario::load(&path).unwrap();
    }
    let bad: Value = serde_json::json!({"params": {"m": -1, "omega": 1}, "forcing": {"type": "zero"}});
    assert!(!v.is_valid(&bad));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let out = out.to_str().unwrap();
    let bad = write_scenario(dir.path(), "bad.json", r#"{"params":{"m":0,"omega":1},"forcing":{"type":"zero"}}"#);
    assert_eq!(exit(&fho(&["classical", "--scenario", &bad, "--out", out])), 2);
    assert_eq!(exit(&fho(&["classical", "--scenario", "/nonexistent.json", "--out", out])), 2);
    assert_eq!(exit(&fho(&["classical", "--out", out])), 2);
    // transition probabilities need ω > 0
    let free = write_scenario(dir.path(), "free.json", r#"{"params":{"m":1,"omega":0},"forcing":{"type":"constant","K":1}}"#);
    assert_eq!(exit(&fho(&["classical", "--scenario", &free, "--out", out])), 0);
    assert_eq!(exit(&fho(&["transitions", "--scenario", &free, "--out", out])), 2);
    // a packet driven off the grid is a numeric failure
    let off = write_scenario(
        dir.path(),
        "off.json",
        r#"{"params":{"m":1,"omega":1},"forcing":{"type":"constant","K":15},"time":{"t_max":3.2,"samples":5}}"#,
    );
    assert_eq!(exit(&fho(&["evolve-pde", "--scenario", &off, "--out", out])), 3);
}

#[test]
fn batch_output_is_bit_stable() {
    let dir = tempfile::tempdir().unwrap();
    let scenarios = [scenario("sinusoid_heavy.json"), scenario("pulse.json")];
    let run = |name: &str, jobs: &str| {
        let out = dir.path().join(name);
        for cmd in ["classical", "transitions"] {
            let o = fho(&[
                cmd, "--scenario", &scenarios[0], "--scenario", &scenarios[1], "--jobs", jobs, "--out", out.to_str().unwrap(),
            ]);
            assert_eq!(exit(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        }
        out
    };
    let a = run("a", "1");
    let b = run("b", "2");
    for stem in ["sinusoid_heavy", "pulse"] {
        for file in ["classical.csv", "frame.csv", "transitions.csv", "transitions_summary.csv", "transition_rows.json"] {
            let x = std::fs::read(a.join(stem).join(file)).unwrap();
            let y = std::fs::read(b.join(stem).join(file)).unwrap();
            assert!(x == y, "{stem}/{file} differs between runs");
        }
    }
}
