//! End-to-end tests of the `dirac-pdm` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dirac-pdm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Header and data rows of a CSV body, metadata dropped.
fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines
        .next()
        .unwrap()
        .split(',')
        .map(str::to_string)
        .collect();
    let rows = lines
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect();
    (header, rows)
}

fn column(header: &[String], name: &str) -> usize {
    header
        .iter()
        .position(|h| h == name)
        .unwrap_or_else(|| panic!("no column {name}"))
}

fn metadata(text: &str, key: &str) -> f64 {
    text.lines()
        .filter_map(|l| l.strip_prefix("# "))
        .flat_map(|l| l.split_whitespace())
        .find_map(|kv| kv.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("no metadata {key}"))
        .parse()
        .unwrap()
}

#[test]
fn spectrum_constant_mass_examples() {
    let out = run(&[
        "spectrum", "--q", "1", "--b", "0", "--n", "0", "--kappa", "1,-1",
    ]);
    assert!(out.status.success());
    let (h, rows) = csv_rows(&stdout(&out));
    let (mode, kappa, ep, ea) = (
        column(&h, "mode"),
        column(&h, "kappa"),
        column(&h, "E_particle"),
        column(&h, "E_antiparticle"),
    );
    let find = |m: &str, k: &str| rows.iter().find(|r| r[mode] == m && r[kappa] == k).unwrap();
    assert_eq!(find("spin", "1")[ep], "0.6");
    assert_eq!(find("spin", "-1")[ep], "0");
    assert_eq!(find("pseudospin", "-1")[ea], "-0.6");
}

#[test]
fn zero_kappa_is_a_usage_error_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let out = run(&["spectrum", "--kappa", "0", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!path.exists());
    assert!(String::from_utf8_lossy(&out.stderr).contains("kappa"));
}

#[test]
fn unknown_flag_is_a_usage_error() {
    assert_eq!(run(&["spectrum", "--bogus", "1"]).status.code(), Some(2));
}

#[test]
fn verify_fails_on_an_impossible_tolerance() {
    let args = [
        "verify", "--mode", "spin", "--q", "1", "--b", "0.1", "--A", "0", "--n", "0:2", "--kappa",
        "-1,1",
    ];
    assert_eq!(run(&args).status.code(), Some(0));
    let mut strict = args.to_vec();
    strict.extend(["--tol", "1e-17"]);
    let out = run(&strict);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
}

#[test]
fn verify_reports_no_gap_at_constant_mass() {
    let out = run(&[
        "verify",
        "--q",
        "0.5,1",
        "--b",
        "0",
        "--A",
        "0,0.2",
        "--n",
        "0:2",
        "--kappa",
        "-2,-1,1,2",
    ]);
    assert!(out.status.success());
    let (h, rows) = csv_rows(&stdout(&out));
    let (gap, status) = (column(&h, "approximation_gap"), column(&h, "status"));
    let checked: Vec<_> = rows.iter().filter(|r| r[status] == "ok").collect();
    assert!(checked.len() >= 20);
    for r in checked {
        assert!(r[gap].parse::<f64>().unwrap() < 1e-8, "{r:?}");
    }
}

#[test]
fn nonrelativistic_limit_header() {
    let out = run(&["limits", "--nonrel", "--q", "1", "--b", "0", "--l", "0"]);
    assert!(out.status.success());
    assert_eq!(metadata(&stdout(&out), "E"), -0.5);
}

#[test]
fn wavefunction_grid_and_norm() {
    let out = run(&[
        "wavefunction",
        "--q",
        "1",
        "--b",
        "0.1",
        "--n",
        "1",
        "--kappa",
        "-1",
        "--points",
        "400",
        "--rmin",
        "1e-3",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout(&out);
    assert!((metadata(&text, "norm") - 1.0).abs() < 1e-8);
    let eps = metadata(&text, "epsilon");
    let (h, rows) = csv_rows(&text);
    assert_eq!(h, ["r", "F"]);
    assert_eq!(rows.len(), 400);
    let r: Vec<f64> = rows.iter().map(|row| row[0].parse().unwrap()).collect();
    assert!(r[0] >= 1e-3 / eps * (1.0 - 1e-12));
    assert!(r.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn json_keeps_column_order() {
    let out = run(&[
        "spectrum", "--mode", "spin", "--n", "0:1", "--kappa", "1", "--format", "json",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);
    assert_eq!(v[0]["E_particle"], 0.6);
    assert_eq!(v[0]["valid"], "true");
    let first = text.lines().nth(1).unwrap();
    let keys = [
        "\"mode\"",
        "\"n\"",
        "\"kappa\"",
        "\"E_particle\"",
        "\"E_antiparticle\"",
        "\"residual\"",
    ];
    let pos: Vec<usize> = keys.iter().map(|k| first.find(k).unwrap()).collect();
    assert!(pos.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(
        &cfg,
        "# constant mass\nmode = spin\nq = 0.5\nb = 0\nn = 0\nkappa = 1\n",
    )
    .unwrap();
    let cfg = cfg.to_str().unwrap();
    let from_file = csv_rows(&stdout(&run(&["spectrum", "--config", cfg]))).1;
    assert_eq!(from_file.len(), 1);
    let overridden = run(&["spectrum", "--config", cfg, "--q", "1"]);
    let (h, rows) = csv_rows(&stdout(&overridden));
    assert_eq!(rows[0][column(&h, "q")], "1");
    assert_eq!(rows[0][column(&h, "E_particle")], "0.6");

    fs::write(dir.path().join("bad.cfg"), "nonsense = 1\n").unwrap();
    let bad = run(&[
        "spectrum",
        "--config",
        dir.path().join("bad.cfg").to_str().unwrap(),
    ]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn physical_units_scale_energies() {
    let out = run(&[
        "spectrum", "--mode", "spin", "--q", "1", "--b", "0", "--n", "0", "--kappa", "1",
        "--units", "physical", "--m0", "938.272", "--hbarc", "197.327",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let (h, rows) = csv_rows(&stdout(&out));
    let e: f64 = rows[0][column(&h, "E_particle")].parse().unwrap();
    assert!((e - 0.6 * 938.272).abs() < 1e-9);
    assert_eq!(run(&["spectrum", "--m0", "938"]).status.code(), Some(2));
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    let args = ["limits", "--duality", "--q", "1", "--b", "0.1"];
    let direct = stdout(&run(&args));
    let mut to_file = args.to_vec();
    to_file.extend(["--out", path.to_str().unwrap()]);
    assert!(run(&to_file).status.success());
    assert_eq!(fs::read_to_string(Path::new(&path)).unwrap(), direct);
}
