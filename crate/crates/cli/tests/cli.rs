use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qspectral"))
        .args(args)
        .env("QSPECTRAL_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn dt_example_value() {
    let out = run(&["pmf", "dt", "--rho", "1", "--t", "1", "--kmax", "10", "--format", "json"]);
    assert!(out.status.success());
    let s = stdout(&out);
    assert!(s.contains("6.9220062755534639e-1"), "{s}");
}

#[test]
fn schema_keys_golden() {
    let out = run(&["pmf", "nu", "--rho", "1", "--sigma", "1"]);
    assert!(out.status.success());
    let s = stdout(&out);
    for key in [
        "\"command\"",
        "\"params\"",
        "\"methods\"",
        "\"support\"",
        "\"values\"",
        "\"tail_bound\"",
        "\"tol\"",
        "\"version\"",
    ] {
        assert!(s.contains(key), "missing {key} in {s}");
    }
    assert!(!s.contains("\"seed\""));
    let out = run(&["simulate", "--rho", "1", "--sigma", "1", "--reps", "100", "--seed", "9"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("\"seed\": 9"));
}

#[test]
fn moments_example() {
    let out = run(&["moments", "--rho", "1", "--sigma", "1"]);
    assert!(out.status.success());
    let s = stdout(&out);
    assert!(s.contains("\"E_a\": 1.0000000000000000e0"));
    assert!(s.contains("\"E_nu\": 5.0000000000000000e-1"));
    assert!(s.contains("\"E_d\": 5.0000000000000000e-1"));
    assert!(s.contains("\"E_kappa\": 2.5000000000000000e0"));
}

#[test]
fn flag_errors_exit_2_and_write_nothing() {
    let dir = std::env::temp_dir().join(format!("qspectral-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("out.json");
    let out = run(&[
        "pmf", "dt", "--rho", "-1", "--t", "1",
        "--output", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!Path::new(&path).exists());
    // Missing required flags.
    assert_eq!(run(&["pmf", "nu", "--rho", "1"]).status.code(), Some(2));
    assert_eq!(run(&["pmf", "dt", "--rho", "1"]).status.code(), Some(2));
    // Unknown subcommand via clap.
    assert_eq!(run(&["nonsense"]).status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn numeric_errors_exit_3() {
    // kappa gf outside its disc of convergence.
    let out = run(&["gf", "kappa", "--rho", "1", "--sigma", "1", "--z", "1.5"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn deterministic_output_bytes() {
    let args = [
        "compare", "--law", "nu", "--rho", "2", "--sigma", "0.5",
        "--reps", "20000", "--seed", "11",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let args = ["simulate", "--rho", "1", "--sigma", "1", "--reps", "5000", "--seed", "4"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn csv_format() {
    let out = run(&["pmf", "d", "--rho", "1", "--sigma", "1", "--kmax", "3", "--format", "csv"]);
    assert!(out.status.success());
    let s = stdout(&out);
    assert!(s.starts_with("index,value\n"));
    assert_eq!(s.lines().count(), 5);
    assert!(!s.contains('\r'));
}

#[test]
fn compare_dt_gate() {
    let out = run(&["compare", "--law", "dt", "--rho", "1", "--t", "1"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let s = stdout(&out);
    // Simulation columns absent without --reps.
    assert!(!s.contains("\"simulation\""));
    let disc = s
        .lines()
        .find(|l| l.contains("max_analytic_discrepancy"))
        .unwrap();
    let value: f64 = disc
        .trim()
        .trim_start_matches("\"max_analytic_discrepancy\": ")
        .trim_end_matches(',')
        .parse()
        .unwrap();
    assert!(value < 1e-8, "{value}");
}

#[test]
fn compare_nu_c_hand_value() {
    let out = run(&["compare", "--law", "nu-c", "--c", "1", "--rho", "1", "--sigma", "1"]);
    assert!(out.status.success());
    let s = stdout(&out);
    assert!(s.contains("\"spectral\": 6.66666666666666"), "{s}");
    assert!(s.contains("\"oracle\": 6.66666666666666"), "{s}");
}

#[test]
fn output_file_matches_stdout() {
    let dir = std::env::temp_dir().join(format!("qspectral-cli-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("dt.json");
    let piped = run(&["pmf", "dt", "--rho", "1", "--t", "1", "--kmax", "5"]);
    let filed = run(&[
        "pmf", "dt", "--rho", "1", "--t", "1", "--kmax", "5",
        "--output", path.to_str().unwrap(),
    ]);
    assert!(filed.status.success());
    let content = std::fs::read(&path).unwrap();
    assert_eq!(content, piped.stdout);
    std::fs::remove_dir_all(&dir).ok();
}
