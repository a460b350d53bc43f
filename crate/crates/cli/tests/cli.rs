use std::path::Path;
use std::process::{Command, Output};

use masm_core::discretization::config::ProblemConfig;
use serde_json::Value;

fn masm(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_masm"))
        .arg("--output")
        .arg(dir)
        .args(args)
        .output()
        .unwrap()
}

fn read(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn solve_writes_report_hierarchy_and_flux() {
    let dir = tempfile::tempdir().unwrap();
    let out = masm(dir.path(), &["--no-timing", "solve", "--problem", "mini-lattice", "--pins", "2", "--flux", "vtk"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = read(&dir.path().join("report.json"));
    assert_eq!(report.as_object().unwrap().len(), 12);
    assert_eq!(report["time_total"], 0.0);
    assert!(report["final_k"].as_f64().unwrap() > 0.0);
    assert!(dir.path().join("hierarchy.json").exists());
    let vtk = std::fs::read_to_string(dir.path().join("flux.vtk")).unwrap();
    assert!(vtk.contains("SCALARS phi_g1 double 1"));
}

#[test]
fn gen_then_solve_from_config() {
    let dir = tempfile::tempdir().unwrap();
    let out = masm(dir.path(), &["gen", "--problem", "infinite_medium", "--mesh-n", "3", "--file", "im.json"]);
    assert_eq!(out.status.code(), Some(0));
    let path = dir.path().join("im.json");
    let cfg = ProblemConfig::from_file(&path).unwrap();
    assert_eq!(cfg.mesh.nx, 3);
    let out = masm(dir.path(), &["--config", path.to_str().unwrap(), "solve", "--pc", "ras", "--newton-rtol", "1e-10", "--flux", "csv"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let k = read(&dir.path().join("report.json"))["final_k"].as_f64().unwrap();
    assert!((k - 1.2).abs() < 1e-8, "{k}");
    let csv = std::fs::read_to_string(dir.path().join("flux.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("x,y,z,group,phi"));
    assert_eq!(csv.lines().count(), 1 + 64);
}

#[test]
fn config_and_problem_are_exclusive() {
    let dir = tempfile::tempdir().unwrap();
    let out = masm(dir.path(), &["--config", "x.json", "solve", "--problem", "mini_lattice"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not both"));
    let out = masm(dir.path(), &["solve"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bad_config_reports_its_path() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"schema": 1, "mesh": 3}"#).unwrap();
    let out = masm(dir.path(), &["--config", path.to_str().unwrap(), "solve"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("mesh"));
}

#[test]
fn nonconvergence_exits_with_two_and_still_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = masm(dir.path(), &["solve", "--problem", "mini_lattice", "--pins", "2", "--max-newton", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(dir.path().join("report.json").exists());
}

#[test]
fn compare_table_has_every_row() {
    let dir = tempfile::tempdir().unwrap();
    let out = masm(
        dir.path(),
        &["--no-timing", "compare", "--problem", "mini_lattice", "--pins", "2", "--np-list", "2,4", "--pc-list", "ras,masm,masm-sub"],
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let table = read(&dir.path().join("compare.json"));
    assert_eq!(table["eff_semantics"], "desk_analog");
    assert_eq!(table["baseline_np"], 2);
    let rows = table["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 6);
    for row in rows {
        for key in ["np", "pc", "iter_newton", "iter_gmres_avg", "time_pcsetup", "time_pcapply", "time_ksp", "time_total", "eff", "coarsened_rows", "final_k"] {
            assert!(row.get(key).is_some(), "missing {key}");
        }
        if row["np"] == 2 {
            assert_eq!(row["eff"], 100.0);
        } else {
            assert!(row["eff"].is_null());
        }
    }
}

#[test]
fn invalid_np_list_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = masm(dir.path(), &["compare", "--problem", "mini_lattice", "--np1", "2", "--np-list", "3"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn random_initial_guess_reaches_the_same_eigenvalue() {
    let dir = tempfile::tempdir().unwrap();
    let base = ["solve", "--problem", "mini_lattice", "--pins", "2", "--newton-rtol", "1e-10"];
    let out = masm(dir.path(), &base);
    assert_eq!(out.status.code(), Some(0));
    let k1 = read(&dir.path().join("report.json"))["final_k"].as_f64().unwrap();
    let mut args = vec!["--seed", "7"];
    args.extend_from_slice(&base);
    args.extend_from_slice(&["--initial", "random"]);
    let out = masm(dir.path(), &args);
    assert_eq!(out.status.code(), Some(0));
    let k2 = read(&dir.path().join("report.json"))["final_k"].as_f64().unwrap();
    assert!((k1 - k2).abs() < 1e-8, "{k1} vs {k2}");
}
