//! End-to-end runs of the `uniqfem` binary: outputs and exit codes.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn uniqfem(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_uniqfem"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json_lines(o: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&o.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap_or_else(|e| panic!("bad JSON line `{l}`: {e}")))
        .collect()
}

fn last(o: &Output) -> Value {
    json_lines(o).pop().expect("at least one JSON line")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

/// Field CSV on the uniform 8-element mesh of the unit interval.
fn field_1d(values: &[f64]) -> String {
    let n = values.len() - 1;
    let mut s = String::from("vertex_id,x,u\n");
    for (v, u) in values.iter().enumerate() {
        s.push_str(&format!("{v},{},{u}\n", v as f64 / n as f64));
    }
    s
}

#[test]
fn solve_writes_one_row_per_vertex() {
    let tmp = TempDir::new().unwrap();
    let cfg = write(tmp.path(), "sin.cfg", "problem = sin\nelements = 8\n");
    let o = uniqfem(&["solve", "--config", &cfg, "--out", "run"], tmp.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(tmp.path().join("run/solution.csv")).unwrap();
    assert_eq!(csv.lines().filter(|l| !l.starts_with("vertex_id")).count(), 9);
    assert!(tmp.path().join("run/solution.vtk").exists());
    let report: Value = serde_json::from_str(&fs::read_to_string(tmp.path().join("run/report.json")).unwrap()).unwrap();
    assert_eq!(report["converged"], true);
    let s = last(&o);
    assert_eq!(s["command"], "solve");
    assert_eq!(s["n_vertices"], 9);
}

#[test]
fn unparseable_mesh_is_an_input_error() {
    let tmp = TempDir::new().unwrap();
    let mesh = write(tmp.path(), "bad.mesh", "1 3 2 2\n0.0\nnot-a-number\n1.0\n");
    let o = uniqfem(&["solve", "--problem", "sin", "--mesh", &mesh], tmp.path());
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
}

#[test]
fn missing_mesh_is_an_input_error() {
    let tmp = TempDir::new().unwrap();
    let o = uniqfem(&["solve", "--mesh", "nowhere.mesh"], tmp.path());
    assert_eq!(code(&o), 3);
}

#[test]
fn single_picard_iteration_is_a_solver_failure() {
    let tmp = TempDir::new().unwrap();
    let o = uniqfem(&["solve", "--problem", "sin", "--max-iterations", "1"], tmp.path());
    assert_eq!(code(&o), 2);
    let s = last(&o);
    assert_eq!(s["converged"], false);
    assert_eq!(s["iterations"], 1);
}

#[test]
fn mesh_file_replaces_the_problem_mesh() {
    let tmp = TempDir::new().unwrap();
    let mesh = write(tmp.path(), "m.mesh", "# five points\n1 5 4 2\n0\n0.1\n0.5\n0.6\n1\n0 1\n1 2\n2 3\n3 4\n0 D\n4 D\n");
    let o = uniqfem(&["solve", "--problem", "sin", "--mesh", &mesh], tmp.path());
    assert_eq!(code(&o), 0);
    assert_eq!(last(&o)["n_elements"], 4);
}

#[test]
fn constant_field_certifies() {
    let tmp = TempDir::new().unwrap();
    let field = write(tmp.path(), "u.csv", &field_1d(&[0.5; 9]));
    let o = uniqfem(&["certify", "--problem", "sin", "--field", &field], tmp.path());
    // default sin problem has 4 elements; remesh through a config
    assert_eq!(code(&o), 3);
    let cfg = write(tmp.path(), "sin.cfg", "problem = sin\nelements = 8\n");
    let o = uniqfem(&["certify", "--config", &cfg, "--field", &field], tmp.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(last(&o)["pass"], true);
    let csv = fs::read_to_string(tmp.path().join("out/certificate.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("element_id,variation,threshold,margin,pass"));
    assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 9);
}

#[test]
fn jump_of_one_exceeds_the_counterexample_threshold() {
    // k = 1/4, u1 = 1, L0 = (1 - k)/u1: threshold 2k/L0 = 2/3 < 1.
    let tmp = TempDir::new().unwrap();
    let cfg = write(tmp.path(), "sin.cfg", "problem = sin\nelements = 8\n");
    let mut u = [0.0; 9];
    u[4] = 1.0;
    let field = write(tmp.path(), "u.csv", &field_1d(&u));
    let o = uniqfem(
        &["certify", "--config", &cfg, "--field", &field, "--k-alpha", "0.25", "--lipschitz", "0.75"],
        tmp.path(),
    );
    assert_eq!(code(&o), 1);
    let s = last(&o);
    assert_eq!(s["n_failing"], 2);
    assert!((s["max_variation"].as_f64().unwrap() - 1.0).abs() < 1e-15);
}

#[test]
fn certify_rejects_missing_or_mismatched_fields() {
    let tmp = TempDir::new().unwrap();
    let cfg = write(tmp.path(), "sin.cfg", "problem = sin\nelements = 8\n");
    let o = uniqfem(&["certify", "--config", &cfg, "--field", "absent.csv"], tmp.path());
    assert_eq!(code(&o), 3);
    let short = write(tmp.path(), "short.csv", &field_1d(&[0.0; 5]));
    let o = uniqfem(&["certify", "--config", &cfg, "--field", &short], tmp.path());
    assert_eq!(code(&o), 3);
}

#[test]
fn solve_then_certify_round_trips() {
    let tmp = TempDir::new().unwrap();
    let o = uniqfem(&["solve", "--problem", "mixed1d", "--out", "a"], tmp.path());
    assert_eq!(code(&o), 0);
    let o = uniqfem(&["certify", "--problem", "mixed1d", "--field", "a/solution.csv", "--out", "a"], tmp.path());
    assert_eq!(code(&o), 0);
    assert_eq!(last(&o)["n_elements"], 8);
}

#[test]
fn adapt_on_a_certified_problem_takes_one_round() {
    let tmp = TempDir::new().unwrap();
    let o = uniqfem(&["adapt", "--problem", "sin", "--out", "a"], tmp.path());
    assert_eq!(code(&o), 0);
    let s = last(&o);
    assert_eq!(s["status"], "Certified");
    assert_eq!(s["rounds"], 1);
    let hist = fs::read_to_string(tmp.path().join("a/history.jsonl")).unwrap();
    assert_eq!(hist.lines().count(), 1);
}

#[test]
fn adapt_with_a_tight_budget_stops() {
    let tmp = TempDir::new().unwrap();
    let o = uniqfem(&["adapt", "--problem", "steep", "--budget", "16"], tmp.path());
    assert_eq!(code(&o), 1);
    assert_eq!(last(&o)["status"], "BudgetExceeded");
}

#[test]
fn adapt_refines_only_near_the_fronts() {
    let tmp = TempDir::new().unwrap();
    let o = uniqfem(&["adapt", "--problem", "steep", "--out", "a"], tmp.path());
    assert_eq!(code(&o), 0);
    let lines = json_lines(&o);
    let s = lines.last().unwrap();
    assert_eq!(s["status"], "Certified");
    assert!(s["refined_fraction"].as_f64().unwrap() <= 0.25);
    // history: failing counts end at zero, refined roots never decrease
    let rounds = &lines[..lines.len() - 1];
    assert_eq!(rounds.last().unwrap()["n_failing"], 0);
    let roots: Vec<u64> = rounds.iter().map(|r| r["refined_roots"].as_u64().unwrap()).collect();
    assert!(roots.windows(2).all(|w| w[0] <= w[1]));
    assert!(tmp.path().join("a/mesh.txt").exists());
    assert!(tmp.path().join("a/certificate.csv").exists());
}

#[test]
fn adapt_in_2d_reports_lost_regularity() {
    let tmp = TempDir::new().unwrap();
    let o = uniqfem(&["adapt", "--problem", "bubble"], tmp.path());
    assert_eq!(code(&o), 1);
    let s = last(&o);
    assert!(s["status"].get("RegularityLost").is_some(), "{s}");
    assert_eq!(s["refined_roots"], 0);
}

#[test]
fn adapt_rejects_bad_strategy() {
    let tmp = TempDir::new().unwrap();
    let o = uniqfem(&["adapt", "--problem", "steep", "--strategy", "worst:1.5"], tmp.path());
    assert_eq!(code(&o), 3);
    let o = uniqfem(&["adapt", "--problem", "steep", "--strategy", "most"], tmp.path());
    assert_eq!(code(&o), 3);
}

#[test]
fn counterexample_exit_codes() {
    let tmp = TempDir::new().unwrap();
    let o = uniqfem(&["counterexample", "--k", "0.6"], tmp.path());
    assert_eq!(code(&o), 3);
    let o = uniqfem(&["counterexample", "--k", "0.25", "--dim", "3"], tmp.path());
    assert_eq!(code(&o), 3);

    let o = uniqfem(&["counterexample", "--k", "0.3333333333333333"], tmp.path());
    assert_eq!(code(&o), 1);
    let a = last(&o);
    assert!((a["one_d"]["secant_threshold"].as_f64().unwrap() - 1.0).abs() < 1e-12);

    let o = uniqfem(&["counterexample", "--k", "0.25", "--dim", "2"], tmp.path());
    assert_eq!(code(&o), 1);
    assert!((last(&o)["threshold_ratio"].as_f64().unwrap() - 1.0 / 14.0).abs() < 1e-15);
}

#[test]
fn convergence_needs_two_rounds() {
    let tmp = TempDir::new().unwrap();
    let o = uniqfem(&["convergence", "--problem", "sin", "--rounds", "1"], tmp.path());
    assert_eq!(code(&o), 3);
    let o = uniqfem(&["convergence", "--problem", "mixed1d"], tmp.path());
    assert_eq!(code(&o), 3, "mixed1d has no exact solution");
}

#[test]
fn convergence_rates_fall_in_bands() {
    let tmp = TempDir::new().unwrap();
    let o = uniqfem(&["convergence", "--problem", "sin", "--rounds", "4"], tmp.path());
    assert_eq!(code(&o), 0);
    let lines = json_lines(&o);
    assert_eq!(lines.len(), 5);
    assert!(lines[0]["l2_rate"].is_null());
    let r = lines[3]["l2_rate"].as_f64().unwrap();
    assert!((1.8..=2.2).contains(&r));
    assert_eq!(lines[4]["within_bands"], true);

    // an impossible band turns the same study into a failure
    let cfg = write(tmp.path(), "c.cfg", "problem = sin\nl2_band = 3.0, 4.0\n");
    let o = uniqfem(&["convergence", "--config", &cfg, "--rounds", "3"], tmp.path());
    assert_eq!(code(&o), 1);
}

#[test]
fn unknown_config_key_names_its_line() {
    let tmp = TempDir::new().unwrap();
    let cfg = write(tmp.path(), "x.cfg", "# comment\nproblem = sin\nmax_itr = 3\n");
    let o = uniqfem(&["solve", "--config", &cfg], tmp.path());
    assert_eq!(code(&o), 3);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 3") && err.contains("max_itr"), "{err}");
}

#[test]
fn config_mesh_path_is_relative_to_the_config() {
    let tmp = TempDir::new().unwrap();
    fs::create_dir(tmp.path().join("cases")).unwrap();
    write(&tmp.path().join("cases"), "m.mesh", "1 4 3 2\n0\n0.3\n0.7\n1\n0 1\n1 2\n2 3\n0 D\n3 D\n");
    let cfg = write(&tmp.path().join("cases"), "c.cfg", "problem = sin\nmesh = m.mesh\n");
    let o = uniqfem(&["solve", "--config", &cfg], tmp.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(last(&o)["n_elements"], 3);
}

#[test]
fn multi_start_reports_clusters() {
    let tmp = TempDir::new().unwrap();
    let cfg = write(tmp.path(), "m.cfg", "problem = mixed1d\nstarts = 5\nseed = 7\n");
    let o = uniqfem(&["solve", "--config", &cfg], tmp.path());
    assert_eq!(code(&o), 0);
    assert_eq!(last(&o)["clusters"], 1);
}

#[test]
fn mesh_info_reports_angles_in_2d() {
    let tmp = TempDir::new().unwrap();
    let o = uniqfem(&["mesh-info", "--problem", "bubble"], tmp.path());
    assert_eq!(code(&o), 0);
    let m = last(&o);
    assert_eq!(m["dim"], 2);
    assert!(m["max_angle"].as_f64().unwrap() < std::f64::consts::FRAC_PI_2);
    assert_eq!(m["non_regular"], 0);
    let o = uniqfem(&["mesh-info", "--problem", "sin"], tmp.path());
    assert!(last(&o).get("min_angle").is_none());
}

#[test]
fn usage_errors_and_help() {
    let tmp = TempDir::new().unwrap();
    assert_eq!(code(&uniqfem(&[], tmp.path())), 3);
    assert_eq!(code(&uniqfem(&["frobnicate"], tmp.path())), 3);
    assert_eq!(code(&uniqfem(&["--help"], tmp.path())), 0);
    assert_eq!(code(&uniqfem(&["solve", "--problem", "nope"], tmp.path())), 3);
}
