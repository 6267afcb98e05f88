use std::process::{Command, Output};

use serde_json::Value;

fn lensfield(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lensfield"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

fn csv_rows(out: &Output) -> (Vec<String>, Vec<Vec<String>>) {
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    (header, rows)
}

fn status_of<'a>(report: &'a Value, name: &str) -> &'a str {
    report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == name)
        .unwrap_or_else(|| panic!("no check {name}"))["status"]
        .as_str()
        .unwrap()
}

#[test]
fn displacement_csv_contract() {
    let out = lensfield(&["sample", "--field", "displacement", "--R", "2", "--grid", "64", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let (header, rows) = csv_rows(&out);
    assert_eq!(header, ["x1", "x2", "c", "theta", "u1", "u2", "flag"]);
    assert!(!rows.is_empty());
    for row in &rows {
        assert_eq!(row.len(), 7);
        if row[6] == "ok" {
            let cell: f64 = row[4].parse().unwrap();
            // u1 = x2
            assert_eq!(cell, row[1].parse::<f64>().unwrap());
            assert!(row[4].contains('e'));
        }
    }
    let again = lensfield(&["sample", "--field", "displacement", "--R", "2", "--grid", "64", "--format", "csv"]);
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn lame_without_k_has_nonelliptic_rows() {
    let out = lensfield(&["sample", "--field", "lame", "--k", "0", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let (header, rows) = csv_rows(&out);
    let col = header.iter().position(|h| h == "lambda_plus_2mu").unwrap();
    let negative = rows
        .iter()
        .filter(|r| r[col].parse::<f64>().map(|v| v <= 0.0).unwrap_or(false))
        .count();
    assert!(negative > 0);
}

#[test]
fn stress_shear_vanishes_at_one_one() {
    let out = lensfield(&["sample", "--field", "stress", "--k", "1", "--format", "csv"]);
    let (header, rows) = csv_rows(&out);
    let s12 = header.iter().position(|h| h == "sigma12").unwrap();
    let row = rows
        .iter()
        .find(|r| r[0].parse::<f64>().unwrap() == 1.0 && r[1].parse::<f64>().unwrap() == 1.0)
        .expect("(1, 1) is on the default grid");
    assert!(row[s12].parse::<f64>().unwrap().abs() < 1e-12);
}

#[test]
fn cusp_rows_are_marked_singular() {
    let out = lensfield(&["sample", "--field", "strain", "--param-space", "circle", "--grid", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json_of(&out);
    let rows = report["results"]["rows"].as_array().unwrap();
    let singular: Vec<&Value> = rows.iter().filter(|r| r["flag"] == "singular").collect();
    // theta = +-pi/2 on each of the five circles
    assert_eq!(singular.len(), 10);
    assert!(singular.iter().all(|r| r["e12"] == "singular"));

    let csv = lensfield(&["sample", "--field", "strain", "--param-space", "circle", "--grid", "5", "--format", "csv"]);
    let (_, rows) = csv_rows(&csv);
    let row = rows.iter().find(|r| r.last().unwrap() == "singular").unwrap();
    assert_eq!(&row[4..7], ["", "", ""]);
}

#[test]
fn bad_field_and_bad_path() {
    assert_eq!(lensfield(&["sample", "--field", "pressure"]).status.code(), Some(2));
    assert_eq!(lensfield(&["sample"]).status.code(), Some(2));
    let out = lensfield(&["sample", "--field", "stress", "--out", "/nonexistent/dir/out.csv"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_passes_with_k() {
    let out = lensfield(&["verify", "--R", "2", "--k", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json_of(&out);
    for key in ["config", "results", "checks", "warnings"] {
        assert!(report.get(key).is_some(), "missing {key}");
    }
    for check in report["checks"].as_array().unwrap() {
        for key in ["name", "paper_ref", "status", "measured", "expected", "tolerance"] {
            assert!(check.get(key).is_some(), "check lacks {key}: {check}");
        }
        assert!(!check["paper_ref"].as_str().unwrap().is_empty());
    }
    assert_eq!(report["config"]["R"], 2.0);
}

#[test]
fn verify_without_k_reports_ellipticity_as_info() {
    let out = lensfield(&["verify", "--R", "2", "--k", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json_of(&out);
    assert_eq!(status_of(&report, "minimum of lambda + 2 mu at this k"), "info");
    let check = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "minimum of lambda + 2 mu at this k")
        .unwrap();
    assert!(check["measured"].as_f64().unwrap() < 0.0);
}

#[test]
fn verify_rejects_unit_radius() {
    assert_eq!(lensfield(&["verify", "--R", "1.0"]).status.code(), Some(2));
    assert_eq!(lensfield(&["verify", "--k", "-1"]).status.code(), Some(2));
}

#[test]
fn integrals_limits() {
    let out = lensfield(&["integrals", "--R", "2", "--k", "1", "--a-seq", "0.4:7"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json_of(&out);
    let limits = &report["results"]["limits"];
    let coeff = limits["energy_fit"]["singular_coeff"].as_f64().unwrap();
    assert!((coeff - 2.0).abs() <= 1e-3);
    assert!(limits["t2_fit"]["constant_term"].as_f64().unwrap().abs() <= 1e-6);
    let gamma = &report["results"]["gamma"];
    let quoted = gamma["quoted_limit"].as_f64().unwrap();
    assert!((quoted - 12.0 * std::f64::consts::PI).abs() < 1e-12);
    assert!(gamma["extrapolated_limit"].is_number());
    assert!(gamma["difference"].is_number());
    assert!(gamma["disclosure"].as_str().unwrap().contains("4 (R^2 - 1) pi"));
    assert_eq!(status_of(&report, "extrapolated couple against the quoted 4 (R^2 - 1) pi"), "info");
    assert_eq!(report["results"]["rows"].as_array().unwrap().len(), 7);
}

#[test]
fn integrals_single_radius_and_bad_radius() {
    let out = lensfield(&["integrals", "--a", "0.5", "--k", "1", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let (header, rows) = csv_rows(&out);
    assert_eq!(rows.len(), 1);
    let t2 = header.iter().position(|h| h == "t2a").unwrap();
    let t2c = header.iter().position(|h| h == "t2a_closed").unwrap();
    let (q, c): (f64, f64) = (rows[0][t2].parse().unwrap(), rows[0][t2c].parse().unwrap());
    assert!((q - c).abs() <= 1e-8);
    assert_eq!(lensfield(&["integrals", "--a", "3.0"]).status.code(), Some(2));
    assert_eq!(lensfield(&["integrals", "--a", "0.1", "--a-seq", "0.4:3"]).status.code(), Some(2));
}

#[test]
fn ellipticity_examples() {
    let out = lensfield(&["ellipticity", "--R", "2", "--k", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json_of(&out);
    assert!(report["results"]["min_margin"].as_f64().unwrap() < 0.0);

    let out = lensfield(&["ellipticity", "--R", "2"]);
    let thr = json_of(&out)["results"]["k_threshold"].as_f64().unwrap();
    assert!(thr > 0.0 && thr.is_finite());

    let out = lensfield(&["ellipticity", "--R", "1.5", "--k", "100"]);
    assert!(json_of(&out)["results"]["min_margin"].as_f64().unwrap() > 0.0);

    assert_eq!(lensfield(&["ellipticity", "--grid", "16"]).status.code(), Some(2));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# shared settings\nR = 1.5\nk = 3\ngrid = 40\n").unwrap();
    let out_path = dir.path().join("report.json");
    let out = lensfield(&[
        "ellipticity",
        "--config",
        cfg.to_str().unwrap(),
        "--k",
        "7",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(report["config"]["R"], 1.5);
    assert_eq!(report["config"]["k"], 7.0);
    assert_eq!(report["config"]["grid"], 40);

    std::fs::write(&cfg, "colour = blue\n").unwrap();
    assert_eq!(lensfield(&["verify", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
    let missing = dir.path().join("missing.cfg");
    assert_eq!(lensfield(&["verify", "--config", missing.to_str().unwrap()]).status.code(), Some(3));
}
