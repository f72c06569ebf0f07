//! End-to-end tests of the binary: output contracts, exit codes and
//! determinism across worker counts.

use std::io::Write;
use std::process::{Command, Output};

fn entsep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_entsep"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = entsep(args);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(|c| c.to_string()).collect())
        .collect()
}

#[test]
fn measure_ghz4_anchor() {
    let out = stdout(&["measure", "--builtin", "ghz:4", "--m", "2..2"]);
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][0], "ghz:4");
    let r2: f64 = rows[0][3].parse().unwrap();
    assert!((r2 - 0.732).abs() < 5e-4);
    assert_eq!(rows[0][4], "false");
}

#[test]
fn measure_padded_ghz3_pattern() {
    let out = stdout(&["measure", "--builtin", "ghz:3+zero:5"]);
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 7); // m = 2..8
    for row in &rows {
        let m: usize = row[2].parse().unwrap();
        let value: f64 = row[3].parse().unwrap();
        let zero: bool = row[4].parse().unwrap();
        if m <= 6 {
            assert_eq!(value, 0.0);
            assert!(zero);
        } else {
            assert!(value > 1e-6);
            assert!(!zero);
        }
        if m == 8 {
            assert!((value - 0.375).abs() < 1e-9);
        }
    }
}

#[test]
fn measure_malformed_file_exits_2() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    // 2^n - 1 amplitudes.
    write!(
        file,
        r#"{{"n": 2, "amps": [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0]]}}"#
    )
    .unwrap();
    let out = entsep(&["measure", "--state", file.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn measure_cap_exceeded_exits_3_with_guidance() {
    let out = entsep(&["measure", "--builtin", "ghz:13", "--force-path", "generic"]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("symmetric"), "guidance missing: {err}");
}

#[test]
fn measure_force_symmetric_on_asymmetric_exits_2() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    // Weight-1 amplitudes differ, so the symmetry check must reject this.
    write!(
        file,
        r#"{{"n": 2, "amps": [[0.0, 0.0], [0.8, 0.0], [0.6, 0.0], [0.0, 0.0]]}}"#
    )
    .unwrap();
    let out = entsep(&[
        "measure",
        "--state",
        file.path().to_str().unwrap(),
        "--force-path",
        "symmetric",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn measure_auto_selects_symmetric_beyond_cap() {
    // ghz:13 has no generic path for small m; the auto path must succeed.
    let out = stdout(&["measure", "--builtin", "ghz:13", "--m", "2..4"]);
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 3);
    for row in &rows {
        let value: f64 = row[3].parse().unwrap();
        assert!(value > 0.5 && value < 1.0);
    }
}

#[test]
fn sweep_ghz_row_count_and_envelope() {
    let out = stdout(&["sweep", "--family", "ghz", "--n", "3..50"]);
    let rows = csv_rows(&out);
    let expected: usize = (3..=50).map(|n| n - 1).sum(); // 1224
    assert_eq!(rows.len(), expected);
    for row in &rows {
        let value: f64 = row[4].parse().unwrap();
        assert!(value > 0.5);
        assert_eq!(row[2], "0"); // k column is 0 for ghz
    }
}

#[test]
fn sweep_dicke_peak_row() {
    let out = stdout(&["sweep", "--family", "dicke", "--k", "10", "--n", "11..50"]);
    let rows = csv_rows(&out);
    let peak = rows
        .iter()
        .find(|r| r[1] == "20" && r[3] == "20")
        .expect("n=20, m=20 row");
    let value: f64 = peak[4].parse().unwrap();
    assert_eq!(value, 1.0);
    assert_eq!(peak[2], "10");
}

#[test]
fn sweep_w50_mw_value() {
    let out = stdout(&["sweep", "--family", "w", "--n", "50..50", "--m", "50..50"]);
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 1);
    let value: f64 = rows[0][4].parse().unwrap();
    assert!((value - 0.0784).abs() < 1e-12);
}

#[test]
fn stirling_table_values() {
    let out = stdout(&["stirling", "--n", "4..8", "--m", "2"]);
    let rows = csv_rows(&out);
    let exact: Vec<&str> = rows.iter().map(|r| r[2].as_str()).collect();
    assert_eq!(exact, vec!["7", "15", "31", "63", "127"]);
    // Large-n ratio approaches 1 from below for m = 2.
    for row in &rows {
        let ratio: f64 = row[5].parse().unwrap();
        assert!(ratio > 0.85 && ratio < 1.0);
    }
}

#[test]
fn stirling_asym_ratio_near_one_at_50_3() {
    let out = stdout(&["stirling", "--n", "50", "--m", "3"]);
    let rows = csv_rows(&out);
    let ratio: f64 = rows[0][5].parse().unwrap();
    assert!((ratio - 1.0).abs() < 0.1, "ratio {ratio}");
}

#[test]
fn partitions_table() {
    let out = stdout(&["partitions", "--n", "4", "--m", "2"]);
    assert_eq!(out, "n,m,shape,multiplicity\n4,2,1+3,4\n4,2,2+2,3\n");
}

#[test]
fn opcount_table() {
    let out = stdout(&["opcount", "--n", "4..4", "--m", "2"]);
    assert_eq!(out, "n,m,op_count\n4,2,14\n");
    let out = stdout(&["opcount", "--n", "8", "--m", "2"]);
    assert!(out.contains("8,2,254"));
}

#[test]
fn geom_w10_matches_closed_form() {
    let out = stdout(&["geom", "--builtin", "w:10", "--symmetric", "--restarts", "4"]);
    let rows = csv_rows(&out);
    let e_g: f64 = rows[0][2].parse().unwrap();
    let closed = 1.0 - 0.9f64.powi(9);
    assert!((e_g - closed).abs() < 1e-6);
}

#[test]
fn geom_ghz4_half() {
    let out = stdout(&["geom", "--builtin", "ghz:4", "--restarts", "16", "--seed", "1"]);
    let rows = csv_rows(&out);
    let e_g: f64 = rows[0][2].parse().unwrap();
    assert!((e_g - 0.5).abs() < 1e-6);
}

#[test]
fn geom_product_state_near_zero() {
    let out = stdout(&["geom", "--builtin", "zero:4", "--restarts", "4"]);
    let rows = csv_rows(&out);
    let e_g: f64 = rows[0][2].parse().unwrap();
    assert!(e_g < 1e-8);
}

#[test]
fn deterministic_output_across_runs_and_workers() {
    let args = ["sweep", "--family", "dicke", "--k", "3", "--n", "6..20"];
    let once = stdout(&args);
    let twice = stdout(&args);
    assert_eq!(once, twice);

    let w1 = stdout(&["--workers", "1", "sweep", "--family", "dicke", "--k", "3", "--n", "6..20"]);
    let w4 = stdout(&["--workers", "4", "sweep", "--family", "dicke", "--k", "3", "--n", "6..20"]);
    assert_eq!(once, w1);
    assert_eq!(once, w4);

    let m1 = stdout(&["--workers", "1", "measure", "--builtin", "ghz:8"]);
    let m4 = stdout(&["--workers", "4", "measure", "--builtin", "ghz:8"]);
    assert_eq!(m1, m4);

    let g1 = stdout(&["--workers", "1", "--seed", "3", "geom", "--builtin", "ghz:4"]);
    let g4 = stdout(&["--workers", "4", "--seed", "3", "geom", "--builtin", "ghz:4"]);
    assert_eq!(g1, g4);
}

#[test]
fn measure_paths_agree_on_ghz8() {
    // Auto path at n = 8 is generic; compare against the sweep fast path.
    let generic = stdout(&["measure", "--builtin", "ghz:8"]);
    let fast = stdout(&["sweep", "--family", "ghz", "--n", "8..8"]);
    let g_rows = csv_rows(&generic);
    let f_rows = csv_rows(&fast);
    assert_eq!(g_rows.len(), f_rows.len());
    for (g, f) in g_rows.iter().zip(&f_rows) {
        assert_eq!(g[2], f[3]); // same m
        let gv: f64 = g[3].parse().unwrap();
        let fv: f64 = f[4].parse().unwrap();
        assert!((gv - fv).abs() < 1e-9, "m={}: {gv} vs {fv}", g[2]);
    }
}

#[test]
fn json_measure_includes_shapes() {
    let out = stdout(&["--format", "json", "measure", "--builtin", "ghz:4", "--m", "2..2"]);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["state_tag"], "ghz:4");
    assert_eq!(doc["path"], "generic");
    let shapes = doc["report"]["rows"][0]["per_shape"].as_array().unwrap();
    assert_eq!(shapes.len(), 2);
    assert_eq!(shapes[0]["shape"], serde_json::json!([1, 3]));
    let xi = shapes[0]["xi"].as_f64().unwrap();
    assert!((xi - 11.0 / 14.0).abs() < 1e-12);
}

#[test]
fn output_file_writing() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.csv");
    let _ = stdout(&[
        "--out",
        path.to_str().unwrap(),
        "stirling",
        "--n",
        "4",
        "--m",
        "2",
    ]);
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("n,m,S_exact"));
    assert!(text.contains("4,2,7,"));
}

#[test]
fn rejects_conflicting_state_sources() {
    let out = entsep(&["measure", "--builtin", "ghz:4", "--state", "/dev/null"]);
    assert_eq!(out.status.code(), Some(2));
    let out = entsep(&["measure"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn rejects_bad_ranges() {
    let out = entsep(&["sweep", "--family", "ghz", "--n", "9..3"]);
    assert_eq!(out.status.code(), Some(2));
    let out = entsep(&["sweep", "--family", "dicke", "--n", "3..5"]);
    assert_eq!(out.status.code(), Some(2)); // missing --k
    let out = entsep(&["sweep", "--family", "dicke", "--k", "10", "--n", "5..9"]);
    assert_eq!(out.status.code(), Some(2)); // n below k+1
}
