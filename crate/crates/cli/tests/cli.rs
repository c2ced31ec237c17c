use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fracdom_core::orders::vsd_dominates;
use fracdom_core::riskmeasures::{cara_meyer, BenchmarkSet};
use fracdom_core::{Distribution, Utility};
use serde_json::Value;

fn data(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn fracdom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fracdom")).args(args).output().unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = fracdom(&all);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn rows(v: &Value) -> &Vec<Value> {
    v["rows"].as_array().unwrap()
}

/// Writes prices `exp(cumsum(returns))` on consecutive days.
fn price_file(dir: &Path, name: &str, returns: &[f64]) -> String {
    let mut text = String::from("date,open\n");
    let mut level: f64 = 100.0;
    let start = chrono::NaiveDate::from_ymd_opt(2013, 1, 1).unwrap();
    for (i, r) in std::iter::once(0.0).chain(returns.iter().copied()).enumerate() {
        level *= r.exp();
        text.push_str(&format!("{},{}\n", start + chrono::Days::new(i as u64), level));
    }
    let path: PathBuf = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn demo_intro_reports_the_crossing() {
    let v = json(&["demo-intro"]);
    assert_eq!(v["crossings"], "0.6875");
    assert_eq!(v["x1_ssd_preferred"], false);
    assert_eq!(v["x2_ssd_preferred"], false);
    let cross: Vec<&Value> = rows(&v).iter().filter(|r| r["crossing"] == true).collect();
    assert_eq!(cross.len(), 1);
    assert_eq!(cross[0]["es_x1"], cross[0]["es_x2"]);
}

#[test]
fn es_curve_of_two_atom_series_matches_the_library() {
    let dir = tempfile::tempdir().unwrap();
    let f = price_file(dir.path(), "two.csv", &[0.02, -0.01, 0.02, 0.02]);
    let v = json(&["es-curve", "--input", &f]);
    let d = Distribution::new([(-0.01, 0.25), (0.02, 0.75)]).unwrap();
    let expected = d.es_curve().points();
    assert_eq!(rows(&v).len(), expected.len());
    for (r, (p, es)) in rows(&v).iter().zip(expected) {
        assert!((r["p"].as_f64().unwrap() - p).abs() < 1e-12);
        assert!((r["es"].as_f64().unwrap() - es).abs() < 1e-12);
    }
    let flat = json(&["es-curve", "--input", &data("flat.csv")]);
    assert!(rows(&flat).iter().all(|r| r["es"].as_f64() == Some(0.0)));
}

#[test]
fn rho_curve_rows_and_argmin() {
    let dir = tempfile::tempdir().unwrap();
    let x = [0.01, -0.02, 0.005, 0.015, -0.01];
    let b1 = [0.0, -0.03, 0.02, 0.01];
    let b2 = [0.004, -0.005, 0.006];
    let fx = price_file(dir.path(), "x.csv", &x);
    let f1 = price_file(dir.path(), "b1.csv", &b1);
    let f2 = price_file(dir.path(), "b2.csv", &b2);
    let v = json(&["rho-curve", "--input", &fx, "--benchmark", &f1, "--benchmark", &f2, "--c-steps", "21"]);
    let law = |r: &[f64]| Distribution::from_samples(r).unwrap();
    let rows = rows(&v);
    assert_eq!(rows.len(), 21 * 3);
    let mut prev = f64::NEG_INFINITY;
    for r in rows.iter().filter(|r| r["set"] == "K") {
        let c = r["c"].as_f64().unwrap();
        let per = [
            cara_meyer(&law(&x), c, &BenchmarkSet::single(law(&b1))),
            cara_meyer(&law(&x), c, &BenchmarkSet::single(law(&b2))),
        ];
        let winner = if per[1] < per[0] { "b2" } else { "b1" };
        assert_eq!(r["argmin"], winner, "c = {c}");
        let rho = r["rho"].as_f64().unwrap();
        assert!((rho - per[0].min(per[1])).abs() < 1e-12);
        assert!(rho >= prev - 1e-12);
        prev = rho;
    }
    let own = json(&["rho-curve", "--input", &fx, "--benchmark", &fx]);
    assert!(own["rows"].as_array().unwrap().iter().all(|r| r["rho"].as_f64() == Some(0.0)));
}

#[test]
fn cmax_cases() {
    let dir = tempfile::tempdir().unwrap();
    let x = [0.01, -0.02, 0.005, 0.015];
    let fx = price_file(dir.path(), "x.csv", &x);
    let own = json(&["cmax", "--input", &fx, "--benchmark", &fx]);
    assert_eq!(rows(&own)[0]["degenerate"], true);

    let shifted: Vec<f64> = x.iter().map(|r| r - 0.01).collect();
    let fs = price_file(dir.path(), "s.csv", &shifted);
    let none = json(&["cmax", "--input", &fx, "--benchmark", &fs]);
    assert_eq!(rows(&none)[0]["root"], Value::Null);

    // X = 0.11 for sure, Y = 0 or 0.2: the order flips where log cosh(0.1c)/c = 0.01.
    let fp = price_file(dir.path(), "p.csv", &[0.11, 0.11]);
    let fy = price_file(dir.path(), "y.csv", &[0.0, 0.2]);
    let v = json(&["cmax", "--input", &fp, "--benchmark", &fy, "--tol", "1e-10"]);
    let root = rows(&v)[0]["root"].as_f64().unwrap();
    let (x, y) = (Distribution::point_mass(0.11).unwrap(), Distribution::new([(0.0, 0.5), (0.2, 0.5)]).unwrap());
    let (mut lo, mut hi) = (-5.0, 5.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if vsd_dominates(&y, &x, &Utility::cara(mid).unwrap()).unwrap().dominated {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    assert!((root - lo).abs() < 1e-6, "{root} vs {lo}");
}

#[test]
fn riskmin_with_constant_benchmark() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("inst.json");
    std::fs::write(&cfg, r#"{"x0": 3.0, "family": [{"benchmark_es": [[1.5, 1.0]]}]}"#).unwrap();
    let v = json(&["riskmin", "--config", cfg.to_str().unwrap()]);
    assert!((v["kappa_star"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    assert_eq!(rows(&v).len(), 1);
    assert!((rows(&v)[0]["loss"].as_f64().unwrap() - 3.0).abs() < 1e-12);
    std::fs::write(&cfg, r#"{"x0": -1.0, "family": [{"benchmark_es": [[1.5, 1.0]]}]}"#).unwrap();
    assert_eq!(fracdom(&["riskmin", "--config", cfg.to_str().unwrap()]).status.code(), Some(1));
    std::fs::write(&cfg, "{").unwrap();
    assert_eq!(fracdom(&["riskmin", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn falsify_reports() {
    let cara = json(&["falsify", "--utility", "cara:-1"]);
    assert_eq!(rows(&cara)[0]["status"], "no_witness");
    let logistic = json(&["falsify", "--utility", "logistic:1"]);
    assert_eq!(rows(&logistic)[0]["status"], "witness");
    assert!(rows(&logistic)[0]["violation"].as_f64().unwrap() > 1e-8);
    let mps = json(&["falsify", "--utility", "logistic:1", "--mode", "mps", "--rho", "es:0.9"]);
    assert_eq!(rows(&mps)[0]["kind"], "mps");
    let worst = json(&["falsify", "--utility", "logistic:1", "--mode", "mps", "--rho", "worst"]);
    assert_eq!(rows(&worst)[0]["status"], "no_witness");
}

#[test]
fn counterexample_report() {
    let v = json(&["counterexample", "--resolution", "300"]);
    let r = &rows(&v)[0];
    assert_eq!(r["status"], "comonotone_infeasible");
    assert_eq!(r["hits"], 0);
    assert_eq!(r["scanned"].as_u64().unwrap() + r["skipped"].as_u64().unwrap(), 90_000);
}

#[test]
fn summary_of_differences() {
    let v = json(&["summary", "--input", &data("spx.csv"), "--benchmark", &data("dax.csv"), "--window", "stable"]);
    let r = &rows(&v)[0];
    assert_eq!(r["label"], "spx-dax");
    let f = |k: &str| r[k].as_f64().unwrap();
    assert!(f("min") <= f("q1") && f("q1") <= f("median") && f("median") <= f("q3") && f("q3") <= f("max"));
}

#[test]
fn csv_output_round_trips_and_records_seed() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("curve.csv");
    let status = fracdom(&["demo-intro", "--seed", "42", "--output", out.to_str().unwrap()]).status;
    assert!(status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("# fracdom demo-intro seed=42\n"));
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let csv_rows: Vec<Vec<String>> = rdr.records().map(|r| r.unwrap().iter().map(String::from).collect()).collect();
    let js = json(&["demo-intro"]);
    assert_eq!(csv_rows.len(), rows(&js).len());
    for (c, j) in csv_rows.iter().zip(rows(&js)) {
        assert_eq!(c[0].parse::<f64>().unwrap(), j["p"].as_f64().unwrap());
        assert_eq!(c[1].parse::<f64>().unwrap(), j["es_x1"].as_f64().unwrap());
    }
}

#[test]
fn exit_codes() {
    assert_eq!(fracdom(&["es-curve"]).status.code(), Some(2));
    assert_eq!(fracdom(&["es-curve", "--input", "missing.csv"]).status.code(), Some(2));
    assert_eq!(fracdom(&["falsify", "--utility", "bogus:1"]).status.code(), Some(2));
    assert_eq!(fracdom(&["falsify", "--utility", "log", "--mode", "mps"]).status.code(), Some(2));
    assert_eq!(fracdom(&["rho-curve", "--input", &data("spx.csv")]).status.code(), Some(2));
    assert_eq!(fracdom(&["counterexample", "--resolution", "10"]).status.code(), Some(2));
    assert_eq!(fracdom(&["nope"]).status.code(), Some(2));
    let empty = fracdom(&["es-curve", "--input", &data("spx.csv"), "--from", "2030-01-01"]);
    assert_eq!(empty.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&empty.stderr).contains("at least 2"));
}
