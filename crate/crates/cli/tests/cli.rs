//! End-to-end checks of the `torus` binary: exit codes, file formats, and
//! the cross-command workflows (seed → compute → continue → verify).

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn torus() -> Command {
    Command::new(env!("CARGO_BIN_EXE_torus"))
}

fn run(args: &[&str]) -> Output {
    torus().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn field(text: &str, key: &str) -> f64 {
    for tok in text.split_whitespace() {
        if let Some(v) = tok.strip_prefix(&format!("{key}=")) {
            return v.parse().unwrap();
        }
    }
    panic!("no {key}= in {text:?}");
}

fn compute_small(out: &Path) -> Output {
    run(&[
        "compute", "--omega", "golden", "--eta", "1e-3", "--eps", "2e-3", "--n", "64", "--out",
        out.to_str().unwrap(),
    ])
}

#[test]
fn conformal_factor_matches_closed_form() {
    let o = run(&["conformal-factor", "--ecc", "0", "--eta", "1e-3"]);
    assert!(o.status.success());
    let lambda = field(&stdout(&o), "lambda");
    let expect = (-2.0 * std::f64::consts::PI * 1e-3).exp();
    assert!((lambda - expect).abs() <= 1e-15, "{lambda} vs {expect}");
    let a5 = field(&stdout(&o), "a5_integral");
    assert!((a5 - 2.0 * std::f64::consts::PI).abs() <= 1e-14);
}

#[test]
fn usage_error_exits_2() {
    let o = run(&["no-such-command"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["compute", "--omega", "golden"]);
    assert_eq!(o.status.code(), Some(2), "missing required flags");
}

#[test]
fn numerical_failure_exits_1_with_json_record() {
    let o = run(&["compute", "--omega", "0.5", "--eta", "1e-3", "--eps", "1e-3"]);
    assert_eq!(o.status.code(), Some(1));
    let rec: serde_json::Value = serde_json::from_str(stderr(&o).trim()).unwrap();
    assert_eq!(rec["status"], "error");
    assert_eq!(rec["kind"], "no-solution");
    assert!(rec["message"].as_str().unwrap().contains("frequency"));
}

#[test]
fn compute_verify_and_curve() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("t.txt");
    let c = dir.path().join("c.csv");
    let o = torus()
        .args(["compute", "--omega", "golden", "--eta", "1e-3", "--eps", "2e-3", "--n", "64"])
        .args(["--out", t.to_str().unwrap(), "--plot-curve", c.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    let e = field(&stdout(&o), "e");
    assert!((e - 0.3151).abs() < 5e-4, "drift {e}");
    assert!(fs::read_to_string(&t).unwrap().starts_with("spinorbit-torus v1\n"));

    let text = fs::read_to_string(&c).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "theta,x_over_pi,y");
    assert_eq!(rows.len(), 65);
    let phi = (5f64.sqrt() + 1.0) / 2.0;
    for r in &rows[1..] {
        let v: Vec<f64> = r.split(',').map(|x| x.parse().unwrap()).collect();
        assert!(v[1] >= -0.05 && v[1] < 2.05, "x/π out of band: {}", v[1]);
        assert!((v[2] - phi).abs() < 0.05, "y far from ω: {}", v[2]);
    }

    let v = run(&["verify", "--torus", t.to_str().unwrap()]);
    assert!(v.status.success(), "{}", stderr(&v));
    assert_eq!(stdout(&v).matches(" ok").count(), 2);
}

#[test]
fn continuation_writes_schedule_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("t.txt");
    assert!(compute_small(&t).status.success());
    let out = dir.path().join("fam");
    let o = torus()
        .args(["continue", "--from", t.to_str().unwrap(), "--eps-target", "4e-3"])
        .args(["--out-dir", out.to_str().unwrap(), "--adapt-modes", "--targets", "3.5e-3"])
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("final eps="));

    let csv = fs::read_to_string(out.join("continuation.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "eps,e,n,E_sup,err_interlaced,iters,seconds");
    let eps: Vec<f64> = lines[1..]
        .iter()
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert!(eps.windows(2).all(|w| w[1] > w[0]), "{eps:?}");
    assert!(eps.contains(&3.5e-3), "checkpoint missing from {eps:?}");
    assert_eq!(*eps.last().unwrap(), 4e-3);
    for i in 0..=eps.len() {
        assert!(out.join(format!("torus_{i:04}.txt")).exists(), "missing step file {i}");
    }
}

#[test]
fn seed_feeds_compute() {
    let dir = tempfile::tempdir().unwrap();
    let s = dir.path().join("seed.txt");
    let o = torus()
        .args(["seed", "--omega", "silver", "--eta", "1e-3", "--eps", "2e-3"])
        .args(["--keep", "2048", "--transient", "6000", "--out", s.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("reliable=true"));

    let t = dir.path().join("t.txt");
    let o = torus()
        .args(["compute", "--omega", "silver", "--eta", "1e-3", "--eps", "2e-3"])
        .args(["--from", s.to_str().unwrap(), "--out", t.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    let e = field(&stdout(&o), "e");
    assert!((e - 0.2502).abs() < 5e-4, "silver drift {e}");
}

#[test]
fn rotnum_reports_quality() {
    let o = run(&[
        "rotnum", "--eps", "1e-4", "--eta", "1e-3", "--ecc", "0.25", "--keep", "2048",
        "--transient", "6000",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let what = field(&text, "omega_hat");
    let ratio = field(&text, "drift_ratio");
    assert!((what - ratio).abs() < 1e-3);
    assert!(text.contains("reliable=true"));
}

#[test]
fn sweep_at_zero_eps_matches_drift_curve() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("rotation.csv");
    let o = torus()
        .args(["sweep-drift", "--eta", "1e-3", "--eps", "0", "--model", "averaged"])
        .args(["--e-list", "0,0.25", "--keep", "1024", "--transient", "64"])
        .args(["--out", out.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "e,omega_hat,drift_ratio,quality,note");
    for l in &lines[1..] {
        let v: Vec<&str> = l.split(',').collect();
        let what: f64 = v[1].parse().unwrap();
        let ratio: f64 = v[2].parse().unwrap();
        assert!((what - ratio).abs() <= 1e-10, "{l}");
    }
}

#[test]
fn compare_averaged_emits_positive_diff() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("avg_vs_full.csv");
    let o = torus()
        .args(["compare-averaged", "--omega", "golden", "--eta", "1e-3", "--eps-list", "2e-3"])
        .args(["--delta", "1e-10", "--out", out.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "eps,e_full,e_avg,diff,note");
    let diff: f64 = lines[1].split(',').nth(3).unwrap().parse().unwrap();
    assert!(diff > 0.0 && diff < 1e-5, "diff {diff}");
}

#[test]
fn downcast_warning_on_higher_precision_file() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("t.txt");
    assert!(compute_small(&t).status.success());
    let text = fs::read_to_string(&t).unwrap().replacen("prec_bits=53", "prec_bits=96", 1);
    fs::write(&t, text).unwrap();
    let o = run(&["verify", "--torus", t.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stderr(&o).contains("downcast"), "{}", stderr(&o));
}

#[test]
fn jet_test_passes_at_high_precision() {
    let o = run(&["jet-test", "--prec", "128"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert_eq!(text.matches("ok").count(), 2, "{text}");
    assert!(!text.contains("BAD"));
}

#[test]
fn precision_env_var_is_honored() {
    let o = torus()
        .args(["jet-test"])
        .env("SPINORBIT_PREC", "128")
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("log2_ratio=2.0000"));
}
