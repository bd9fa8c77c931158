use std::path::Path;
use std::process::{Command, Output};

use minres_cli::report::RunReport;
use serde_json::Value;

const FRONT: &str = "1/(1+u^2)+0.5";
const REAR: &str = "0.5/(1+u^2)-0.5";

fn minres(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_minres"))
        .args(args)
        .env_remove("MINRES_TOL")
        .output()
        .expect("binary runs")
}

fn problem<'a>(dim: &'a str, t: &'a str, h: &'a str, plus: &'a str, minus: &'a str) -> Vec<&'a str> {
    vec!["--dim", dim, "--T", t, "--H", h, "--p-plus", plus, "--p-minus", minus]
}

fn run(cmd: &str, rest: &[&str]) -> Output {
    let mut args = vec![cmd];
    args.extend_from_slice(rest);
    minres(&args)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr_json(o: &Output) -> Value {
    let text = String::from_utf8(o.stderr.clone()).unwrap();
    assert_eq!(text.trim_end().lines().count(), 1, "one JSON line on stderr: {text}");
    serde_json::from_str(text.trim()).unwrap()
}

fn report(o: &Output) -> RunReport {
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn classify_prints_planar_thresholds() {
    let o = run("classify", &problem("2", "2", "6", FRONT, REAR));
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "DoubleTriangle h=3.000 thresholds=[1.000, 1.608, 2.608]");

    let o = run("classify", &problem("2", "1", "2", FRONT, REAR));
    assert!(stdout(&o).starts_with("TriangleOverTrapezium h=2.000"), "{}", stdout(&o));
    // at h = u0 the trapezium degenerates to the triangle
    let o = run("classify", &problem("2", "2", "2", FRONT, REAR));
    assert!(stdout(&o).starts_with("FrontTriangle h=1.000"), "{}", stdout(&o));
    let o = run("classify", &problem("2", "2", "1", FRONT, REAR));
    assert!(stdout(&o).starts_with("FrontTrapezium h=0.500"), "{}", stdout(&o));
    let o = run("classify", &problem("2", "2", "3", FRONT, REAR));
    assert!(stdout(&o).starts_with("FrontTriangle h=1.500"), "{}", stdout(&o));
    let o = run("classify", &problem("2", "2", "0", FRONT, REAR));
    assert!(stdout(&o).starts_with("FlatDisk"), "{}", stdout(&o));
}

#[test]
fn classify_zero_rear_has_infinite_thresholds() {
    let o = run("classify", &problem("2", "1", "5", "newton:1,0", "zero"));
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "FrontTriangle h=5.000 thresholds=[1.000, inf, inf]");
}

#[test]
fn solve_flat_disk() {
    let r = report(&run("solve", &problem("3", "1", "0", "newton:1,0", "zero")));
    assert_eq!(r.case_label, "FlatDisk");
    assert_eq!(r.r_total, 1.0);
    assert_eq!(r.schema, "1");
    assert_eq!(r.command, "solve");
}

#[test]
fn solve_classical_newton_body() {
    let r = report(&run("solve", &problem("3", "1", "1.0845482255552044", "newton:1,0", "zero")));
    let u = r.u_plus.unwrap();
    assert!((u - 2.0).abs() < 1e-8, "U_plus = {u}");
    assert!((r.r_total - 0.3464722839111675).abs() < 1e-9, "R_total = {}", r.r_total);
    assert!(r.thresholds.u_star.is_none());
    assert_eq!(r.spec.p_minus, "zero");
}

#[test]
fn solve_trapezium_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("p.csv");
    let svg = dir.path().join("p.svg");
    let json = dir.path().join("r.json");
    let mut args = problem("2", "2", "1", FRONT, REAR);
    for (flag, path) in [("--out-profile", &csv), ("--out-svg", &svg), ("--out-report", &json)] {
        args.push(flag);
        args.push(path.to_str().unwrap());
    }
    let o = run("solve", &args);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "FrontTrapezium R_total=2.5");

    let r: RunReport = serde_json::from_slice(&std::fs::read(&json).unwrap()).unwrap();
    assert!((r.r_total - 2.5).abs() < 1e-12);
    assert!(r.timing_ms.is_none());

    let table = std::fs::read_to_string(&csv).unwrap();
    let mut lines = table.lines();
    assert_eq!(lines.next(), Some("t,x_front,x_rear,u_front,u_rear"));
    assert_eq!(lines.next(), Some("0,0,0,0,0"));

    let pic = std::fs::read_to_string(&svg).unwrap();
    assert!(pic.starts_with("<svg") && pic.contains(r#"width="800" height="600""#));
    assert!(pic.contains("FrontTrapezium") && pic.contains("H = 1"));
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let mut texts = Vec::new();
    for i in 0..2 {
        let csv = dir.path().join(format!("p{i}.csv"));
        let svg = dir.path().join(format!("p{i}.svg"));
        let mut args = problem("3", "1", "2", FRONT, REAR);
        args.extend(["--out-profile", csv.to_str().unwrap(), "--out-svg", svg.to_str().unwrap()]);
        let o = run("solve", &args);
        assert_eq!(o.status.code(), Some(0));
        texts.push((o.stdout, std::fs::read(&csv).unwrap(), std::fs::read(&svg).unwrap()));
    }
    assert_eq!(texts[0], texts[1]);
}

#[test]
fn report_round_trips() {
    let o = run("solve", &problem("4", "1", "0.3", FRONT, REAR));
    let r = report(&o);
    let again = serde_json::to_string_pretty(&r).unwrap();
    let back: RunReport = serde_json::from_str(&again).unwrap();
    assert_eq!(back, r);
    let original: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(serde_json::to_value(&r).unwrap(), original);
}

#[test]
fn timing_is_opt_in() {
    let mut args = problem("2", "2", "6", FRONT, REAR);
    args.push("--timing");
    let r = report(&run("solve", &args));
    assert!(r.timing_ms.unwrap() >= 0.0);
}

#[test]
fn verify_certifies_figure_pair() {
    let o = run("verify", &problem("2", "2", "6", FRONT, REAR));
    let r = report(&o);
    let oracle = r.oracle.unwrap();
    assert!(oracle.passed);
    assert_eq!(oracle.profile_source, "solver");
    assert!(oracle.total_relative_gap.unwrap() < 0.01);
    assert!(oracle.maximality.iter().all(|m| m.passed));
}

#[test]
fn verify_certifies_spatial_newton_body() {
    let r = report(&run("verify", &problem("3", "1", "1.0845482255552044", "newton:1,0", "zero")));
    let oracle = r.oracle.unwrap();
    assert!(oracle.passed);
    let gap = oracle.total_relative_gap.unwrap();
    assert!((0.0..0.01).contains(&gap), "gap {gap}");
}

#[test]
fn verify_rejects_a_perturbed_profile() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "t,x_front,x_rear,u_front,u_rear\n0,0,0,,\n0.5,0,,,\n2,1,0,,\n").unwrap();
    let mut args = problem("2", "2", "1", FRONT, REAR);
    args.extend(["--check-profile", bad.to_str().unwrap()]);
    let o = run("verify", &args);
    assert_eq!(o.status.code(), Some(4));
    let err = stderr_json(&o);
    assert_eq!(err["error"], "CertificateFailure");
    let m = &err["maximality"][0];
    assert_eq!(m["passed"], false);
    assert!(m["witness_t"].as_f64().is_some() && m["witness_u"].as_f64().is_some());
    // the report itself still lands on stdout
    let r: RunReport = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r.oracle.unwrap().profile_source, format!("csv:{}", bad.display()));
}

#[test]
fn verify_accepts_its_own_profile() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("p.csv");
    let mut args = problem("2", "2", "6", FRONT, REAR);
    args.extend(["--out-profile", csv.to_str().unwrap()]);
    assert_eq!(run("solve", &args).status.code(), Some(0));
    let mut args = problem("2", "2", "6", FRONT, REAR);
    args.extend(["--check-profile", csv.to_str().unwrap()]);
    let r = report(&run("verify", &args));
    assert!(r.oracle.unwrap().passed);
}

#[test]
fn input_errors_exit_2_with_json() {
    let o = run("solve", &problem("2", "1", "1", "1/(1+u^2", REAR));
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_json(&o)["error"], "SyntaxError");

    let o = run("solve", &problem("2", "1", "1", "1/(1+v^2)", REAR));
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_json(&o)["error"], "UnknownIdentifier");

    let o = run("solve", &problem("2", "1", "1", "2", REAR));
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_json(&o)["error"], "DegenerateLaw");

    let o = run("solve", &problem("2", "-1", "1", FRONT, REAR));
    assert_eq!(o.status.code(), Some(2));

    let o = minres(&["solve", "--dim", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_json(&o)["error"], "UsageError");
}

#[test]
fn numerical_failure_exits_3() {
    let o = run("solve", &problem("3", "1", "1e30", "newton:1,0", "zero"));
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stderr_json(&o)["error"], "NoConvergence");
}

#[test]
fn unwritable_output_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("missing").join("p.csv");
    let mut args = problem("2", "2", "1", FRONT, REAR);
    args.extend(["--out-profile", target.to_str().unwrap()]);
    let o = run("solve", &args);
    assert_eq!(o.status.code(), Some(1));
    assert!(!Path::new(&target).exists());
}

#[test]
fn help_and_version_succeed() {
    let o = minres(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("classify"));
    let o = minres(&["--version"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("minres "));
}
