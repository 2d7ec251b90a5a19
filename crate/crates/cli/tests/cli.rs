use std::f64::consts::PI;
use std::fs;
use std::process::{Command, Output};

use tffilter_core::gaussian::{gaussian_singular_values, GaussianSif};
use tffilter_core::slepian::pswf_solve_legendre;

fn tffilter(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tffilter")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = tffilter(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn column(csv: &str, col: usize) -> Vec<f64> {
    csv.lines().skip(1).map(|l| l.split(',').nth(col).unwrap().parse().unwrap()).collect()
}

#[test]
fn decompose_layout() {
    let text = stdout(&["decompose", "--filter", "gaussian", "--bt", "0.5", "--n-modes", "3"]);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n[1],lambda_n[1],lambda_n_sq[1],cumulative_sq[1]"));
    assert_eq!(lines.clone().count(), 3);
    let exact = gaussian_singular_values(&GaussianSif::from_bt(0.5).unwrap(), 3);
    for (got, want) in column(&text, 1).iter().zip(&exact) {
        assert_eq!(got, want);
    }
    assert!(text.ends_with('\n') && !text.contains('\r'));
}

#[test]
fn slepian_decompose_matches_library() {
    let text = stdout(&["decompose", "--filter", "slepian", "--bt", "1.3", "--n-modes", "6"]);
    let sol = pswf_solve_legendre(PI / 2.0 * 1.3, 5).unwrap();
    for (got, beta) in column(&text, 2).iter().zip(sol.eigenvalues()) {
        assert!((got - beta).abs() <= 1e-12 * beta.max(1e-300), "{got} vs {beta}");
    }
}

#[test]
fn bt_accepts_over_two_pi() {
    let a = stdout(&["decompose", "--filter", "gaussian", "--bt", "2.3/2pi", "--n-modes", "2"]);
    let b = stdout(&["decompose", "--filter", "gaussian", "--bt", &format!("{}", 2.3 / (2.0 * PI)), "--n-modes", "2"]);
    assert_eq!(column(&a, 1), column(&b, 1));
}

#[test]
fn tradeoff_ends_with_reference_row() {
    let text = stdout(&["tradeoff", "--filter", "gaussian", "--bt-min", "0.1", "--bt-max", "2", "--points", "1"]);
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines[0], "filter,BT[1],eta[1],xi[1],selectivity[1]");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("gaussian,1e-1,"));
    assert_eq!(lines[2], "qpg,,9.9e-1,9.8e-1,9.702e-1");
}

#[test]
fn qkd_all_families() {
    let text = stdout(&["qkd", "--filter", "all", "--ny-min", "0", "--ny-max", "0", "--points", "1", "--optimize"]);
    let rows: Vec<csv::StringRecord> = csv::Reader::from_reader(text.as_bytes()).records().map(Result::unwrap).collect();
    let labels: Vec<_> = rows.iter().map(|r| r[0].to_string()).collect();
    assert_eq!(labels, ["gaussian", "slepian", "point:0.99,0.98", "point:0.9999,0.9999"]);
    assert_eq!(&rows[2][4], "9.801e-1");
    // the noiseless optimum sits at the efficiency ceiling for both families
    assert_eq!(rows[0][4], rows[1][4]);
}

#[test]
fn qkd_curve_mode_rows() {
    let text = stdout(&["qkd", "--filter", "gaussian", "--ny-min", "0.01", "--ny-max", "0.1", "--points", "2", "--eta-points", "9"]);
    assert_eq!(text.lines().count(), 1 + 2 * 9);
}

#[test]
fn modes_are_unit_norm() {
    let text = stdout(&["modes", "--filter", "gaussian", "--bt", "1", "--mode", "1", "--span", "8", "--points", "801"]);
    let t = column(&text, 0);
    let re = column(&text, 1);
    let dt = t[1] - t[0];
    let norm: f64 = re.iter().map(|v| v * v * dt).sum();
    assert!((norm - 1.0).abs() < 1e-6, "{norm}");
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["decompose", "--filter", "gaussian"][..],
        &["snr", "--filter", "gaussian", "--bt", "0.5", "--trials", "0", "--seed", "1"],
        &["snr", "--filter", "gaussian", "--bt", "0.5"],
        &["decompose", "--filter", "gaussian", "--bt", "-1"],
        &["qkd", "--filter", "lorentzian"],
        &["qkd", "--filter", "gaussian", "--ny-min", "0", "--ny-max", "1", "--points", "3"],
    ] {
        let out = tffilter(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn numeric_failures_exit_3() {
    let out = tffilter(&["modes", "--filter", "slepian", "--bt", "0.2", "--mode", "500"]);
    assert_eq!(out.status.code(), Some(3));
    let out = tffilter(&["decompose", "--filter", "slepian", "--bt", "1", "--n-modes", "200"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn unwritable_output_exits_1() {
    let out = tffilter(&["decompose", "--filter", "gaussian", "--bt", "1", "--out", "/nonexistent/dir/x.csv"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn file_output_writes_manifest_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("snr.json");
    let p = path.to_str().unwrap();
    let args = ["snr", "--filter", "gaussian", "--bt", "0.5", "--trials", "300", "--seed", "4", "--out", p];
    let out = tffilter(&args);
    assert!(out.status.success() && out.stdout.is_empty());
    let first = fs::read(&path).unwrap();
    let sidecar: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("snr.json.manifest.json")).unwrap()).unwrap();
    assert_eq!(sidecar["manifest"]["seed"], 4);
    assert_eq!(sidecar["manifest"]["parameters"]["trials"], "300");
    assert!(sidecar["manifest"]["rng"].as_str().unwrap().starts_with("ChaCha20"));
    assert!(sidecar["timestamp"].is_string());

    assert!(tffilter(&args).status.success());
    assert_eq!(fs::read(&path).unwrap(), first);
    let report: serde_json::Value = serde_json::from_slice(&first).unwrap();
    let (snr, expect, se) = (
        report["snr_empirical"].as_f64().unwrap(),
        report["snr_analytic"].as_f64().unwrap(),
        report["snr_stderr"].as_f64().unwrap(),
    );
    assert!((snr - expect).abs() < 5.0 * se, "{report}");
}

#[test]
fn seeds_change_snr_output() {
    let run = |seed: &str| stdout(&["snr", "--filter", "gaussian", "--bt", "0.5", "--trials", "200", "--seed", seed]);
    assert_ne!(run("1"), run("2"));
}
