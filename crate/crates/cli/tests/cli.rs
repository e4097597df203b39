use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn rrw(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rrw"))
        .arg("--out")
        .arg(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

fn manifest(dir: &Path, stem: &str) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(dir.join(format!("{stem}.manifest.json"))).unwrap()).unwrap()
}

#[test]
fn verify_interlacing_passes_and_writes_report() {
    let d = TempDir::new().unwrap();
    let o = rrw(d.path(), &["verify", "interlacing", "--trials", "500", "--seed", "1"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(d.path().join("verify_interlacing.json")).unwrap()).unwrap();
    assert_eq!(report["checks"][0]["failures"], 0);
    let m = manifest(d.path(), "verify_interlacing");
    assert_eq!(m["subcommand"], "verify");
    assert_eq!(m["seed"], 1);
    assert_eq!(m["passed"], true);
    assert_eq!(m["outputs"].as_array().unwrap().len(), 1);
    assert!(m["started"].as_str().unwrap() <= m["finished"].as_str().unwrap());
}

#[test]
fn verify_trees_exhaustive() {
    let d = TempDir::new().unwrap();
    let o = rrw(d.path(), &["verify", "trees", "--exhaustive-n", "10"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

#[test]
fn verify_laplacian_and_bounds_pass() {
    let d = TempDir::new().unwrap();
    assert_eq!(code(&rrw(d.path(), &["verify", "laplacian", "--trials", "200"])), 0);
    let o = rrw(d.path(), &["verify", "bounds", "--trials", "40", "--exhaustive-n", "8", "--haupt-graphs", "5"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

#[test]
fn verify_sandwich_reports_the_plain_chain_comparison() {
    let d = TempDir::new().unwrap();
    let o = rrw(d.path(), &["verify", "sandwich", "--trials", "50"]);
    let out = stdout(&o);
    assert_eq!(code(&o), 1, "{out}");
    assert!(out.contains("comp2_right_lazy: 500 checks, 0 failures"));
    assert!(out.contains("comp2_left: 500 checks, 0 failures"));
    assert_eq!(manifest(d.path(), "verify_sandwich")["passed"], false);
}

#[test]
fn usage_errors_exit_two() {
    let d = TempDir::new().unwrap();
    assert_eq!(code(&rrw(d.path(), &["verify", "bogus"])), 2);
    assert_eq!(code(&rrw(d.path(), &["percolate", "subcritical", "--p", "1.5"])), 2);
    assert_eq!(code(&rrw(d.path(), &["percolate", "mass-transport", "--dim", "0"])), 2);
    assert_eq!(code(&rrw(d.path(), &["ids", "--periodic"])), 2);
    assert_eq!(code(&rrw(d.path(), &["bounds", "nonsense"])), 2);
    let o = rrw(d.path(), &["bounds", "haupt", "--delta", "3"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("--n"));
    let o = rrw(d.path(), &["bounds", "lifshitz", "--chi", "2"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("--dim"));
}

#[test]
fn mass_transport_within_clt_band() {
    let d = TempDir::new().unwrap();
    let o = rrw(
        d.path(),
        &["percolate", "mass-transport", "--side", "8", "--dim", "2", "--p", "0.3", "--samples", "10000", "--t", "5", "--seed", "1"],
    );
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let rows = csv_rows(&d.path().join("percolate_mass-transport.csv"));
    let z: f64 = rows[0][5].parse().unwrap();
    assert!(z.abs() <= 4.0);
}

#[test]
fn critical_tree_lower_bound() {
    let d = TempDir::new().unwrap();
    let o = rrw(d.path(), &["percolate", "critical-tree", "--samples", "20000", "--t", "4,16,64", "--seed", "1"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert_eq!(csv_rows(&d.path().join("percolate_critical-tree.csv")).len(), 3);
}

#[test]
fn geometric_and_subcritical_dominate() {
    let d = TempDir::new().unwrap();
    let o = rrw(d.path(), &["percolate", "geometric", "--samples", "1000"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let o = rrw(d.path(), &["percolate", "subcritical", "--samples", "500", "--side", "48"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let header = fs::read_to_string(d.path().join("percolate_subcritical.csv")).unwrap();
    assert!(header.starts_with("t,mean_return,stderr_return,mean_inv_size,stderr_inv_size,bound,in_window\n"));
}

#[test]
fn ids_step_at_zero() {
    let d = TempDir::new().unwrap();
    let o = rrw(d.path(), &["ids", "--p", "0", "--side", "16", "--dim", "2"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    for r in csv_rows(&d.path().join("ids.csv")) {
        assert_eq!(r[1], "1.0");
        assert_eq!(r[2], "0.0");
    }
}

#[test]
fn ids_desk_scale() {
    let d = TempDir::new().unwrap();
    let o = rrw(d.path(), &["ids", "--p", "0.3", "--side", "64", "--dim", "2", "--samples", "2000", "--seed", "1"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

#[test]
fn haupt_curve_inside_window() {
    let d = TempDir::new().unwrap();
    let o = rrw(d.path(), &["bounds", "haupt", "--n", "100", "--delta", "3", "--t-min", "224", "--t-max", "2227", "--t-points", "50"]);
    assert_eq!(code(&o), 0);
    let rows = csv_rows(&d.path().join("bounds_haupt.csv"));
    assert_eq!(rows.len(), 50);
    assert!(rows.iter().all(|r| r[2] == "true"));
}

#[test]
fn tree_lower_is_decreasing() {
    let d = TempDir::new().unwrap();
    assert_eq!(code(&rrw(d.path(), &["bounds", "tree-lower", "--t-min", "1", "--t-max", "100"])), 0);
    let v: Vec<f64> = csv_rows(&d.path().join("bounds_tree-lower.csv")).iter().map(|r| r[1].parse().unwrap()).collect();
    assert!(v.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn critical2d_prints_exponent() {
    let d = TempDir::new().unwrap();
    let o = rrw(d.path(), &["bounds", "critical2d", "--theta", "5", "--t-points", "10"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let w: f64 = out
        .lines()
        .find_map(|l| l.strip_prefix("w = "))
        .expect("w line")
        .parse()
        .unwrap();
    assert!((w - 0.484_477_876).abs() < 1e-8, "{w}");
    assert_eq!(csv_rows(&d.path().join("bounds_critical2d.csv")).len(), 10);
}

#[test]
fn other_bound_kinds_emit_csv() {
    let d = TempDir::new().unwrap();
    for args in [
        &["bounds", "trivial", "--n", "50", "--delta", "3"][..],
        &["bounds", "app", "--n-hat", "2", "--delta", "4", "--inv-size", "0.5"],
        &["bounds", "bperc", "--chi", "2", "--dim", "2", "--inv-size", "0.6"],
        &["bounds", "lifshitz", "--chi", "2", "--dim", "2"],
    ] {
        let o = rrw(d.path(), args);
        assert_eq!(code(&o), 0, "{args:?}");
    }
    let rows = csv_rows(&d.path().join("bounds_lifshitz.csv"));
    assert!(rows.iter().any(|r| r[2] == "true") && rows.iter().any(|r| r[2] == "false"));
}

#[test]
fn reruns_reproduce_data_files() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    let args = ["percolate", "subcritical", "--samples", "300", "--side", "40", "--seed", "9"];
    assert_eq!(code(&rrw(a.path(), &args)), 0);
    let o = Command::new(env!("CARGO_BIN_EXE_rrw"))
        .env("RRW_THREADS", "1")
        .arg("--out")
        .arg(b.path())
        .arg("--sequential")
        .args(args)
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    for f in ["percolate_subcritical.csv", "percolate_subcritical.json"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f}");
    }
}
