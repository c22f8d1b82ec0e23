use std::fs;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_deepwater-evans")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn ind2_at_first_resonance() {
    let o = run(&["ind2", "--N", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("ind2 = -1.410156250000"), "{s}");
    assert!(s.contains("verdict: no eps^2-order instability"), "{s}");
}

#[test]
fn bf_prints_branch_coefficients() {
    let o = run(&["bf"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("alpha(1,0) = 0.000000000000+0.500000000000i"), "{s}");
    assert!(s.contains("0.353553390593+0.000000000000i and -0.353553390593"), "{s}");
}

#[test]
fn verify_passes_at_unit_parameters() {
    let o = run(&["verify", "--kappa", "1", "--g", "1"]);
    let s = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{s}");
    assert!(s.contains("all checks passed"));
    assert!(!s.contains("FAIL") && !s.contains("SKIP"));
    assert_eq!(s.lines().filter(|l| l.starts_with("PASS")).count(), 13);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["ind2", "--N", "x"]).status.code(), Some(2));
    assert_eq!(run(&["ind2", "--N", "1"]).status.code(), Some(2));
    assert_eq!(run(&["bf", "--kappa", "-1"]).status.code(), Some(2));
    assert_eq!(run(&["trace", "--steps", "0"]).status.code(), Some(2));
}

#[test]
fn trace_csv_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    let o = run(&["trace", "--steps", "4", "--out", a.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = Command::new(env!("CARGO_BIN_EXE_deepwater-evans"))
        .args(["trace", "--steps", "4", "--out", b.to_str().unwrap()])
        .env("EVANS_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let csv_a = fs::read_to_string(a.join("trace.csv")).unwrap();
    assert_eq!(csv_a, fs::read_to_string(b.join("trace.csv")).unwrap());
    let mut lines = csv_a.lines();
    assert_eq!(lines.next(), Some("gamma,re_lambda1,im_lambda1,re_lambda2,im_lambda2"));
    assert_eq!(lines.count(), 4);
    assert_eq!(fs::read_to_string(a.join("trace.txt")).unwrap(), fs::read_to_string(b.join("trace.txt")).unwrap());
}

#[test]
fn dispersion_and_stokes_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(run(&["dispersion", "--steps", "9", "--out", out]).status.code(), Some(0));
    let csv = fs::read_to_string(dir.path().join("dispersion.csv")).unwrap();
    assert!(csv.starts_with("k,sigma_plus,sigma_minus\n"));
    assert_eq!(csv.lines().count(), 10);
    assert!(dir.path().join("roots.csv").exists());
    let o = run(&["stokes", "--out", out]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("phi[1] = "));
    assert!(fs::read_to_string(dir.path().join("stokes.csv")).unwrap().starts_with("x,eta\n"));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "kappa = 2\ng = 2\n").unwrap();
    let s = stdout(&run(&["resonance", "--N", "2", "--config", cfg.to_str().unwrap()]));
    assert!(s.contains("sigma = 1.500000000000"), "{s}");
    let s = stdout(&run(&["resonance", "--N", "2", "--config", cfg.to_str().unwrap(), "--kappa", "1", "--g", "1"]));
    assert!(s.contains("sigma = 0.750000000000"), "{s}");
    fs::write(&cfg, "colour = red\n").unwrap();
    assert_eq!(run(&["bf", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn coeffs_at_resonance_and_dump() {
    let s = stdout(&run(&["coeffs", "--sigma", "resonance:2"]));
    assert!(s.contains("a(0,2) =") && s.contains("d(2,0,0)"), "{s}");
    let s = stdout(&run(&["coeffs", "--dump-reduction"]));
    assert!(s.contains("reduction dump:") && s.contains("A[1,0](1,1) = "), "{s}");
    assert_eq!(run(&["coeffs", "--sigma", "resonance:x"]).status.code(), Some(2));
}
