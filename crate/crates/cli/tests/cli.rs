use std::path::Path;
use std::process::{Command, Output};

use mfseries::io::{SeriesFile, SeriesKind};
use tempfile::TempDir;

fn mfseries(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mfseries"))
        .args(args)
        .env_remove("MFSERIES_TOL")
        .output()
        .expect("binary runs")
}

fn scalar_file(kind: SeriesKind, coeffs: &[f64]) -> SeriesFile {
    SeriesFile {
        dim: 1,
        order: coeffs.len() - 1,
        kind,
        series: coeffs.iter().map(|&c| vec![vec![[c, 0.0]]]).collect(),
    }
}

fn write(dir: &TempDir, name: &str, file: &SeriesFile) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, file.to_json()).unwrap();
    path.to_str().unwrap().to_owned()
}

fn read(path: &Path) -> SeriesFile {
    SeriesFile::parse(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn scalar_values(file: &SeriesFile) -> Vec<f64> {
    file.series
        .iter()
        .map(|rows| {
            assert_eq!(rows[0][0][1], 0.0);
            rows[0][0][0]
        })
        .collect()
}

#[test]
fn verify_scalar_campaign() {
    let out = mfseries(&["verify-twisted", "--dim", "1", "--order", "4", "--trials", "5", "--seed", "7"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("5 of 5 trials passed"));
}

#[test]
fn verify_matrix_campaign() {
    let out = mfseries(&[
        "verify-twisted", "--dim", "2", "--order", "5", "--trials", "20", "--seed", "42", "--tol", "1e-8",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn verify_rejects_bad_dimension() {
    assert_eq!(mfseries(&["verify-twisted", "--dim", "9"]).status.code(), Some(2));
    assert_eq!(mfseries(&["verify-twisted", "--trials", "0"]).status.code(), Some(2));
    assert_eq!(mfseries(&["verify-twisted", "--tol", "-1"]).status.code(), Some(2));
}

#[test]
fn json_reports_are_reproducible() {
    let args = ["verify-twisted", "--dim", "2", "--order", "3", "--trials", "4", "--seed", "11", "--json"];
    let a = mfseries(&args);
    let b = mfseries(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let lines: Vec<serde_json::Value> = String::from_utf8(a.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 4);
    for (i, line) in lines.iter().enumerate() {
        assert_eq!(line["trial"], i as u64);
        assert_eq!(line["seed"], 11 + i as u64);
        assert_eq!(line["pass"], true);
        assert_eq!(line["theorem"].as_array().unwrap().len(), 3);
        assert!(line.get("wall_time_ms").is_none());
    }
}

#[test]
fn timing_is_opt_in() {
    let out = mfseries(&["verify-twisted", "--dim", "1", "--order", "2", "--trials", "1", "--json", "--timing"]);
    let line: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(line["wall_time_ms"].as_f64().is_some());
}

#[test]
fn tolerance_from_environment() {
    let run = |tol: &str| {
        Command::new(env!("CARGO_BIN_EXE_mfseries"))
            .args(["verify-twisted", "--dim", "2", "--order", "4", "--trials", "2", "--json"])
            .env("MFSERIES_TOL", tol)
            .output()
            .unwrap()
    };
    let loose = run("1e-6");
    assert!(loose.status.success());
    let line: serde_json::Value =
        serde_json::from_str(String::from_utf8(loose.stdout).unwrap().lines().next().unwrap()).unwrap();
    assert_eq!(line["tolerance"], 1e-6);
    // nothing survives a zero tolerance at d = 2
    assert_eq!(run("0").status.code(), Some(1));
}

#[test]
fn cumulants_to_moments_catalan() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "c.json", &scalar_file(SeriesKind::Cumulants, &[1.0; 4]));
    let output = dir.path().join("m.json");
    let out = mfseries(&["cumulants-to-moments", "--in", &input, "--out", output.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let file = read(&output);
    assert_eq!(file.kind, SeriesKind::Moments);
    for (got, want) in scalar_values(&file).iter().zip([1.0, 2.0, 5.0, 14.0]) {
        assert!((got - want).abs() <= 1e-12);
    }
}

#[test]
fn moments_to_cumulants_roundtrip() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "m.json", &scalar_file(SeriesKind::Moments, &[1.0, 2.0, 5.0, 14.0]));
    let output = dir.path().join("c.json");
    let out = mfseries(&["moments-to-cumulants", "--in", &input, "--out", output.to_str().unwrap()]);
    assert!(out.status.success());
    let file = read(&output);
    assert_eq!(file.kind, SeriesKind::Cumulants);
    for got in scalar_values(&file) {
        assert!((got - 1.0).abs() <= 1e-12);
    }
}

#[test]
fn s_transform_of_constant_one() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "m.json", &scalar_file(SeriesKind::Moments, &[1.0; 4]));
    let output = dir.path().join("s.json");
    let out = mfseries(&["s-transform", "--in", &input, "--out", output.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let file = read(&output);
    assert_eq!(file.kind, SeriesKind::STransform);
    assert_eq!(file.order, 2);
    let values = scalar_values(&file);
    assert!((values[0] - 1.0).abs() <= 1e-12);
    for v in &values[1..] {
        assert!(v.abs() <= 1e-12);
    }
}

#[test]
fn t_transform_of_free_poisson() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "m.json", &scalar_file(SeriesKind::Moments, &[1.0, 2.0, 5.0, 14.0]));
    let output = dir.path().join("t.json");
    let out = mfseries(&["t-transform", "--in", &input, "--out", output.to_str().unwrap()]);
    assert!(out.status.success());
    let file = read(&output);
    assert_eq!(file.kind, SeriesKind::Generic);
    // S(z) = 1/(1+z), so T(z) = 1 + z
    for (got, want) in scalar_values(&file).iter().zip([1.0, 1.0, 0.0]) {
        assert!((got - want).abs() <= 1e-12);
    }
}

#[test]
fn s_transform_needs_invertible_mean() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "m.json", &scalar_file(SeriesKind::Moments, &[0.0, 1.0, 2.0]));
    let output = dir.path().join("s.json");
    let out = mfseries(&["s-transform", "--in", &input, "--out", output.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not invertible"));
    assert!(!output.exists());
}

#[test]
fn transform_usage_errors() {
    let dir = TempDir::new().unwrap();
    let out_path = dir.path().join("o.json");
    let out = out_path.to_str().unwrap();

    let missing = dir.path().join("missing.json");
    let r = mfseries(&["s-transform", "--in", missing.to_str().unwrap(), "--out", out]);
    assert_eq!(r.status.code(), Some(2));

    let wrong_kind = write(&dir, "c.json", &scalar_file(SeriesKind::Cumulants, &[1.0, 1.0]));
    assert_eq!(mfseries(&["s-transform", "--in", &wrong_kind, "--out", out]).status.code(), Some(2));

    let mut bad_shape = scalar_file(SeriesKind::Moments, &[1.0, 1.0]);
    bad_shape.order = 3;
    let bad_shape = write(&dir, "b.json", &bad_shape);
    assert_eq!(mfseries(&["moments-to-cumulants", "--in", &bad_shape, "--out", out]).status.code(), Some(2));

    let garbage = dir.path().join("g.json");
    std::fs::write(&garbage, "{\"dim\": 1}").unwrap();
    let r = mfseries(&["cumulants-to-moments", "--in", garbage.to_str().unwrap(), "--out", out]);
    assert_eq!(r.status.code(), Some(2));

    let generic = write(&dir, "x.json", &scalar_file(SeriesKind::Generic, &[1.0, 1.0]));
    assert!(mfseries(&["cumulants-to-moments", "--in", &generic, "--out", out]).status.success());
}

#[test]
fn matrix_transforms_roundtrip() {
    let dir = TempDir::new().unwrap();
    let c = dir.path().join("c.json");
    let m = dir.path().join("m.json");
    let c2 = dir.path().join("c2.json");
    // a 2x2 cumulant series: mean diag(1, 2), identity linear part, nothing else
    let mut series = vec![vec![vec![[1.0, 0.0]], vec![[0.0, 0.0]], vec![[0.0, 0.0]], vec![[2.0, 0.0]]]];
    series.push(
        (0..4)
            .map(|o| (0..4).map(|i| [if i == o { 1.0 } else { 0.0 }, 0.0]).collect())
            .collect(),
    );
    let file = SeriesFile { dim: 2, order: 1, kind: SeriesKind::Cumulants, series };
    std::fs::write(&c, file.to_json()).unwrap();
    let s = |p: &Path| p.to_str().unwrap().to_owned();
    assert!(mfseries(&["cumulants-to-moments", "--in", &s(&c), "--out", &s(&m)]).status.success());
    assert!(mfseries(&["moments-to-cumulants", "--in", &s(&m), "--out", &s(&c2)]).status.success());
    let back = read(&c2);
    assert_eq!(back.dim, 2);
    for (a, b) in back.series.iter().flatten().flatten().zip(file.series.iter().flatten().flatten()) {
        assert!((a[0] - b[0]).abs() <= 1e-12 && (a[1] - b[1]).abs() <= 1e-12);
    }
}

#[test]
fn oracle_compare_passes() {
    let out = mfseries(&["oracle-compare", "--dim", "1", "--order", "4", "--max-oracle-degree", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let out = mfseries(&["oracle-compare", "--dim", "2", "--order", "4", "--max-oracle-degree", "2", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn oracle_compare_json() {
    let out = mfseries(&["oracle-compare", "--dim", "2", "--order", "3", "--max-oracle-degree", "3", "--json"]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["deviations"].as_array().unwrap().len(), 4);
    assert_eq!(report["pass"], true);
}

#[test]
fn oracle_compare_usage_errors() {
    assert_eq!(mfseries(&["oracle-compare", "--max-oracle-degree", "8"]).status.code(), Some(2));
    assert_eq!(
        mfseries(&["oracle-compare", "--order", "2", "--max-oracle-degree", "3"]).status.code(),
        Some(2)
    );
}
