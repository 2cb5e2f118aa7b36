use std::process::{Command, Output};

use gamma0_dims::formulas::{SpaceKind, Weight};
use gamma0_dims::spectrum::{read_table, CACHE_DIR_ENV};

const BIN: &str = env!("CARGO_BIN_EXE_gamma0-dims");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).env_remove(CACHE_DIR_ENV).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn dim_reports_terms_and_total() {
    let o = run(&["dim", "--space", "full", "--weight", "2", "--level", "37"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let mut lines = s.lines();
    assert!(lines.next().unwrap().starts_with("# gamma0-dims dimension v1"));
    assert_eq!(lines.next().unwrap(), "space,k,N,psi_12ths,nu_inf_12ths,nu2_12ths,nu3_12ths,delta_12ths,total");
    assert_eq!(lines.next().unwrap(), "full,2,37,38,-12,-6,-8,12,2");

    let o = run(&["dim", "--space", "new", "--weight", "12", "--level", "1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["total"], "1");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["dim", "--space", "new", "--weight", "5", "--level", "3"]).status.code(), Some(1));
    assert_eq!(run(&["bogus"]).status.code(), Some(1));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
    let o = run(&["scan", "--space", "new", "--weight", "2", "--limit", "10", "--output", "/nonexistent/dir/x.csv"]);
    assert_eq!(o.status.code(), Some(3));
    let o = run(&["verify", "squarefull_tail", "--grid", "100", "--ceiling", "0.01"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("failed"));
}

#[test]
fn binary_scan_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.bin");
    let p = path.to_str().unwrap();
    let o = run(&["scan", "--space", "min", "--weight", "4", "--limit", "3000", "--binary", "--output", p]);
    assert_eq!(o.status.code(), Some(0));
    let t = read_table(std::fs::File::open(&path).unwrap()).unwrap();
    assert_eq!((t.space, t.k, t.limit), (SpaceKind::Min, Weight::new(4).unwrap(), 3000));

    let csv = stdout(&run(&["scan", "--space", "min", "--weight", "4", "--limit", "3000"]));
    let rows: Vec<u64> = csv
        .lines()
        .skip(2)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(rows, t.dims());
    assert_eq!(run(&["scan", "--space", "min", "--weight", "4", "--limit", "30", "--binary"]).status.code(), Some(1));
}

#[test]
fn cache_directory_is_used() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["scan", "--space", "new", "--weight", "2", "--limit", "1000"];
    let a = Command::new(BIN).args(args).env(CACHE_DIR_ENV, dir.path()).output().unwrap();
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    let b = Command::new(BIN).args(args).env(CACHE_DIR_ENV, dir.path()).output().unwrap();
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, run(&args).stdout);
}

#[test]
fn missing_lists_gaps() {
    let o = run(&["missing", "--space", "full", "--weight", "2", "--target", "150", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["certificate"]["envelope"]["kind"], "primorial");
    let gaps = v["missing"].as_array().unwrap().len() as u64;
    assert_eq!(gaps + v["attained_count"].as_u64().unwrap(), 151);

    let o = run(&["missing", "--space", "min", "--weight", "2", "--target", "500", "--method", "index"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("envelope=index"));
}

#[test]
fn spectrum_handles_zero() {
    let o = run(&["spectrum", "--space", "new", "--weight", "2", "--grid", "0,120,1200", "--ford-d", "2.1769687"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let rows: Vec<&str> = s.lines().skip(2).collect();
    assert_eq!(rows[0], "0,1,,");
    assert_eq!(rows.len(), 3);
    assert!(rows[2].split(',').all(|f| !f.is_empty()));
}

#[test]
fn verify_suites_pass() {
    for args in [
        vec!["verify", "nu_bounds", "--limit", "20000"],
        vec!["verify", "eta", "--grid", "100,10000"],
        vec!["verify", "oracles", "--limit", "2000", "--max-weight", "8"],
        vec!["verify", "delta_values", "--limit", "20000", "--checkpoint", "10000", "--r-max", "2"],
        vec!["verify", "exceptions", "--grid", "1000"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        assert!(stdout(&o).starts_with("# gamma0-dims report v1"));
    }
    let o = run(&["verify", "eta", "--grid", "100", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["passed"], true);
}
