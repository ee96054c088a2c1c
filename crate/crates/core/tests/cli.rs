//! End-to-end tests of the `nnvc` binary. Golden files live in
//! `tests/golden`; set `NNVC_UPDATE_GOLDEN=1` to rewrite them.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn nnvc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nnvc")).args(args).env_remove("NNVC_SEED").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn golden(name: &str, actual: &str) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("NNVC_UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, expected, "output differs from {}", path.display());
}

fn tmp(dir: &tempfile::TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn bounds_table_matches_golden() {
    let o = nnvc(&["bounds", "--d", "2,3", "--m", "3..6"]);
    assert!(o.status.success());
    golden("bounds_table.txt", &stdout(&o));
}

#[test]
fn bounds_csv_rows() {
    let o = nnvc(&["bounds", "--d", "2..3", "--m", "3..6", "--format", "csv"]);
    assert!(o.status.success());
    let out = stdout(&o);
    golden("bounds.csv", &out);
    let rows: Vec<Vec<&str>> = out.lines().skip(1).map(|l| l.split(',').collect()).collect();
    let row = |d: &str, m: &str| rows.iter().find(|r| r[0] == d && r[1] == m).unwrap().clone();
    assert_eq!(row("2", "3")[2], "6");
    assert_eq!(row("2", "3")[5], "55");
    assert_eq!(row("2", "4")[2], "9");
    assert_eq!((row("3", "3")[2], row("3", "3")[3]), ("8", "12"));
}

#[test]
fn bounds_json_schema() {
    let o = nnvc(&["bounds", "--d", "2", "--m", "3", "--format", "json"]);
    assert!(o.status.success());
    golden("bounds.json", &stdout(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["rows"][0]["lower"], 6);
}

#[test]
fn unsupported_ranges_are_usage_errors() {
    for args in
        [["bounds", "--d", "1", "--m", "3"], ["bounds", "--d", "2", "--m", "2"], ["bounds", "--d", "65", "--m", "3"]]
    {
        let o = nnvc(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(stderr(&o).contains("error"));
    }
    assert_eq!(nnvc(&["bounds", "--m", "x..y"]).status.code(), Some(2));
    assert_eq!(nnvc(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn odd_polygon_witness_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let cert = tmp(&dir, "odd_polygon4.json");
    let o = nnvc(&["witness", "odd-polygon", "--m", "4", "--out", cert.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v = read_json(&cert);
    assert_eq!(v["witnesses"].as_object().unwrap().len(), 512);
    assert_eq!(v["verified"], true);
    assert_eq!(v["arrangement"]["kind"], "odd_polygon");
    assert!(v["meta"].is_object());
    let v = nnvc(&["verify", cert.to_str().unwrap()]);
    assert!(v.status.success(), "{}", stderr(&v));
    assert!(stdout(&v).contains("verified: true"));
}

#[test]
fn flipped_witness_label_fails_naming_the_bitmask() {
    let dir = tempfile::tempdir().unwrap();
    let cert = tmp(&dir, "g.json");
    assert!(nnvc(&["witness", "odd-polygon", "--m", "4", "--no-meta", "--out", cert.to_str().unwrap()])
        .status
        .success());
    let mut v = read_json(&cert);
    let labels = v["witnesses"]["0a5"]["labels"].as_array_mut().unwrap();
    let l0 = labels[0].as_i64().unwrap();
    labels[0] = Value::from(-l0);
    std::fs::write(&cert, serde_json::to_string(&v).unwrap()).unwrap();
    let o = nnvc(&["verify", cert.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("0x0a5"), "{}", stderr(&o));
}

#[test]
fn raised_mu_fails() {
    let dir = tempfile::tempdir().unwrap();
    let cert = tmp(&dir, "t.json");
    assert!(nnvc(&["witness", "takacs", "--n", "2", "--no-meta", "--out", cert.to_str().unwrap()]).status.success());
    let mut v = read_json(&cert);
    let min = v["min_margin"].as_f64().unwrap();
    v["mu"] = Value::from(min * 2.0);
    std::fs::write(&cert, serde_json::to_string(&v).unwrap()).unwrap();
    let o = nnvc(&["verify", cert.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("below"));
    let o = nnvc(&["verify", cert.to_str().unwrap(), "--mu", "1e-6"]);
    assert!(o.status.success());
}

#[test]
fn corrupt_and_mismatched_files_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cert = tmp(&dir, "t.json");
    assert!(nnvc(&["witness", "takacs", "--n", "2", "--no-meta", "--out", cert.to_str().unwrap()]).status.success());
    let text = std::fs::read_to_string(&cert).unwrap();
    let broken = tmp(&dir, "broken.json");
    std::fs::write(&broken, &text[..text.len() / 2]).unwrap();
    assert_eq!(nnvc(&["verify", broken.to_str().unwrap()]).status.code(), Some(2));
    let mut v: Value = serde_json::from_str(&text).unwrap();
    v["schema_version"] = Value::from(2);
    let future = tmp(&dir, "future.json");
    std::fs::write(&future, serde_json::to_string(&v).unwrap()).unwrap();
    let o = nnvc(&["verify", future.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("schema"));
    let mut v: Value = serde_json::from_str(&text).unwrap();
    v["witnesses"].as_object_mut().unwrap().remove("2a");
    let missing = tmp(&dir, "missing.json");
    std::fs::write(&missing, serde_json::to_string(&v).unwrap()).unwrap();
    let o = nnvc(&["verify", missing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("0x2a"));
    assert_eq!(nnvc(&["verify", "/nonexistent/cert.json"]).status.code(), Some(2));
}

#[test]
fn takacs_certificate_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (tmp(&dir, "a.json"), tmp(&dir, "b.json"));
    for p in [&a, &b] {
        let o = nnvc(&["witness", "takacs", "--n", "2", "--no-meta", "--out", p.to_str().unwrap()]);
        assert!(o.status.success());
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    assert_eq!(read_json(&a)["witnesses"].as_object().unwrap().len(), 64);
    golden("takacs2.json", &text);
}

#[test]
fn square_polytope_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let cert = tmp(&dir, "sq.json");
    let o = nnvc(&["witness", "polytope", "--square", "--no-meta", "--out", cert.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v = read_json(&cert);
    let w = v["witnesses"].as_object().unwrap();
    assert_eq!(w.len(), 1);
    assert_eq!(w.values().next().unwrap()["prototypes"].as_array().unwrap().len(), 5);
    assert!(nnvc(&["verify", cert.to_str().unwrap()]).status.success());
    assert_eq!(nnvc(&["witness", "polytope"]).status.code(), Some(2));
}

#[test]
fn unverified_certificates_need_force() {
    let dir = tempfile::tempdir().unwrap();
    let cert = tmp(&dir, "g.json");
    let path = cert.to_str().unwrap();
    let o = nnvc(&["witness", "odd-polygon", "--m", "4", "--mu", "10", "--out", path]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!cert.exists());
    assert!(stderr(&o).contains("--force"));
    let o = nnvc(&["witness", "odd-polygon", "--m", "4", "--mu", "10", "--force", "--out", path]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(read_json(&cert)["verified"], false);
    assert_eq!(nnvc(&["verify", path]).status.code(), Some(1));
    assert_eq!(nnvc(&["witness", "odd-polygon", "--m", "3"]).status.code(), Some(2));
}

#[test]
fn search_writes_a_reverifiable_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let cert = tmp(&dir, "s.json");
    let o = nnvc(&["search", "--d", "2", "--m", "2", "--n", "3", "--no-meta", "--out", cert.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("certificate: found"));
    assert!(nnvc(&["verify", cert.to_str().unwrap()]).status.success());

    let o = nnvc(&["search", "--d", "2", "--m", "3", "--n", "7", "--trials", "3"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("certificate: none within budget"));
    assert!(out.contains("budget: trials=3"));
}

#[test]
fn seed_comes_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_nnvc"))
        .args(["search", "--d", "2", "--m", "2", "--n", "3"])
        .env("NNVC_SEED", "41")
        .output()
        .unwrap();
    assert!(stdout(&o).contains("seed: 41"));
    let a = nnvc(&["search", "--d", "2", "--m", "2", "--n", "4", "--seed", "5"]);
    let b = nnvc(&["search", "--d", "2", "--m", "2", "--n", "4", "--seed", "5"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn plot_data_curves() {
    let o = nnvc(&["plot-data", "--d", "2,3", "--m", "3..50"]);
    assert!(o.status.success());
    let out = stdout(&o);
    golden("plot_d2_d3.csv", &out);
    let mut lines = out.lines();
    assert_eq!(lines.next().unwrap(), "m,tight_d2,loose_d2,ratio_d2,tight_d3,loose_d3,ratio_d3");
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 48);
    for w in rows.windows(2) {
        for c in 1..7 {
            if c % 3 != 0 {
                assert!(w[1][c] > w[0][c], "column {c} not increasing at m = {}", w[1][0]);
            }
        }
    }
    for r in &rows {
        assert!(r[3] >= 1.0 && r[6] >= 1.0);
        assert!(r[1] < r[4], "d=2 tight above d=3 at m = {}", r[0]);
    }
    let dir = tempfile::tempdir().unwrap();
    let file = tmp(&dir, "p.csv");
    assert!(nnvc(&["plot-data", "--m", "3..50", "--out", file.to_str().unwrap()]).status.success());
    assert_eq!(std::fs::read_to_string(&file).unwrap(), out);
}
