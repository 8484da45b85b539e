use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn mfc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mfc"))
        .args(args)
        .env("MFC_THREADS", "2")
        .output()
        .expect("spawn mfc")
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is a single JSON document")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn oracle_run_reports_bounds() {
    let out = mfc(&[
        "run", "--gen", "uniform", "--n", "2000", "--d", "4", "--metric", "euclidean", "--strategy", "kcenter",
        "--t", "32", "--seed", "7", "--oracle",
    ]);
    let r = json(&out);
    let ratio = r["cost_ratio"].as_f64().unwrap();
    assert!(ratio >= 1.0 - 1e-9);
    assert!(r["w_mfc"].as_f64().unwrap() <= 2.62 * r["w_tstar"].as_f64().unwrap());
    assert_eq!(r["bound_satisfied"], Value::Bool(true));
    assert_eq!(r["queries"]["exact-baseline"], 2000 * 1999 / 2);
    assert_eq!(r["queries"]["coarsen"], 2000 * 31);
}

#[test]
fn set_input_without_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let sets = dir.path().join("sets.txt");
    let lines: Vec<String> = (0..200u32).map(|i| format!("{} {} {}", i % 7, i % 11 + 7, i % 13 + 20)).collect();
    std::fs::write(&sets, lines.join("\n")).unwrap();
    let r = json(&mfc(&[
        "run", "--input", p(&sets), "--metric", "jaccard", "--strategy", "kcenter", "--t", "16", "--seed", "1",
    ]));
    assert!(r["w_mfc"].as_f64().unwrap() > 0.0);
    assert!(r["cost_ratio"].is_null());
    assert!(r["gamma_bar"].is_null());
    assert_eq!(r["queries"]["exact-baseline"], 0);
}

#[test]
fn runs_are_byte_identical_modulo_timing() {
    let args = ["run", "--gen", "gaussian", "--g", "5", "--ppc", "40", "--t", "6", "--seed", "3", "--oracle"];
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("stage_seconds");
        v.as_object_mut().unwrap().remove("stage_fractions");
        v.to_string()
    };
    assert_eq!(strip(json(&mfc(&args))), strip(json(&mfc(&args))));
}

#[test]
fn error_paths_have_distinct_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "1,2\n3,x\n").unwrap();
    let words = dir.path().join("words.txt");
    std::fs::write(&words, "abc\nab\n").unwrap();
    let cases: Vec<(Vec<&str>, u8)> = vec![
        (vec!["run", "--input", "/nonexistent/file", "--metric", "jaccard"], 3),
        (vec!["run", "--input", p(&bad), "--metric", "euclidean"], 4),
        (vec!["run", "--input", p(&bad), "--metric", "jaccard"], 4),
        (vec!["run", "--gen", "uniform", "--n", "10", "--metric", "jaccard"], 5),
        (vec!["run", "--input", p(&words), "--metric", "hamming"], 6),
        (vec!["run", "--gen", "uniform", "--n", "10", "--t", "11"], 6),
        (vec!["run", "--gen", "uniform", "--n", "100", "--oracle", "--n-cap", "50"], 7),
    ];
    let mut seen = std::collections::BTreeMap::new();
    for (args, code) in cases {
        let out = mfc(&args);
        assert_eq!(out.status.code(), Some(i32::from(code)), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(out.stdout.is_empty(), "{args:?} wrote to stdout");
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
        seen.insert(code, args);
    }
    assert_eq!(seen.len(), 5);
}

#[test]
fn gen_exact_gamma_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("pts.csv");
    let side = json(&mfc(&["gen", "--gen", "uniform", "--n", "300", "--d", "3", "--seed", "4", "--out", p(&data)]));
    assert_eq!(side["spec"]["generator"], "uniform");
    assert!(dir.path().join("pts.csv.json").exists());

    let tree = dir.path().join("tree.csv");
    let env = json(&mfc(&["exact", "--input", p(&data), "--metric", "euclidean", "--out", p(&tree)]));
    assert_eq!(env["edges"].as_array().unwrap().len(), 299);
    assert_eq!(env["queries"]["total"], 300 * 299 / 2);

    let forest = dir.path().join("forest.csv");
    let part = dir.path().join("part.csv");
    let report = json(&mfc(&[
        "run", "--input", p(&data), "--metric", "euclidean", "--t", "8", "--seed", "4", "--oracle",
        "--forest", p(&forest), "--partition", p(&part),
    ]));
    assert!(dir.path().join("part.csv.json").exists());
    let g = json(&mfc(&["gamma", "--forest", p(&forest), "--tree", p(&tree)]));
    assert_eq!(g["t"], 8);
    let (a, b) = (g["gamma_bar"].as_f64().unwrap(), report["gamma_bar"].as_f64().unwrap());
    assert!((a - b).abs() <= 1e-9 * a.max(1.0), "{a} vs {b}");
}

#[test]
fn planted_gen_writes_sidecar_only() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("planted");
    let side = json(&mfc(&["gen", "--gen", "planted", "--n", "20", "--p", "4", "--out", p(&out)]));
    let pair = side["planted_pair"].as_array().unwrap();
    assert!(pair[0].as_u64().unwrap() < 10 && pair[1].as_u64().unwrap() >= 10);
    assert!(!out.exists());
    let r = json(&mfc(&["run", "--gen", "planted", "--n", "20", "--p", "4", "--strategy", "natural", "--oracle"]));
    assert_eq!(r["t"], 2);
    assert_eq!(r["metric"], "planted");
}

#[test]
fn sweep_marks_failures_and_continues() {
    let out = mfc(&["sweep", "--gen", "uniform", "--n", "50", "--t-list", "4,60", "--repeats", "2", "--oracle"]);
    assert!(out.status.success());
    let csv = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows.len(), 1 + 4 + 2);
    assert!(rows[3].contains("failed"));
    assert!(rows[6].starts_with("aggregate,60,,failed"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("failed"));
}

#[test]
fn table_and_csv_formats() {
    let base = ["run", "--gen", "uniform", "--n", "200", "--t", "4", "--oracle"];
    let table = mfc(&[&base[..], &["--table"]].concat());
    assert!(String::from_utf8_lossy(&table.stdout).contains("cost ratio"));
    let csv = mfc(&[&base[..], &["--format", "csv"]].concat());
    let text = String::from_utf8(csv.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0].split(',').count(), lines[1].split(',').count());
}
