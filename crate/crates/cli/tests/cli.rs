use std::process::{Command, Output};

use serde_json::Value;

fn jgreen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jgreen"))
        .args(args)
        .output()
        .expect("run jgreen")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn complex(v: &Value) -> (f64, f64) {
    (v["re"].as_f64().unwrap(), v["im"].as_f64().unwrap())
}

#[test]
fn both_methods_agree() {
    let out = jgreen(&[
        "green", "--model", "coulomb", "--D", "3", "--l", "0", "--Zp", "2", "--bS", "1", "--eps", "-4", "0", "--N",
        "10", "--method", "both",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["result"]["matrix"]["deviation"].as_f64().unwrap() <= 1e-10);
    assert_eq!(v["result"]["matrix"]["values"].as_array().unwrap().len(), 10);
    assert_eq!(v["config"]["N"], 10);
    assert!(v["diagnostics"]["converged"].as_bool().unwrap());
}

#[test]
fn pole_is_a_numerical_failure() {
    let out = jgreen(&["green", "--eps", "-1", "0", "--N", "5"]);
    assert_eq!(out.status.code(), Some(3));
    let v = json(&out);
    assert_eq!(v["error"]["kind"], "singular_matrix");
    assert_eq!(v["error"]["pivot"], 0);
}

#[test]
fn matched_oscillator_is_diagonal() {
    let out = jgreen(&["green", "--model", "oscillator", "--omega", "1", "--omegaP", "1", "--E", "0.5", "--N", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let rows = v["result"]["matrix"]["values"].as_array().unwrap();
    for (i, row) in rows.iter().enumerate() {
        for (j, z) in row.as_array().unwrap().iter().enumerate() {
            let (re, im) = complex(z);
            if i == j {
                let expect = 1.0 / (0.5 - (2.0 * i as f64 + 1.5));
                assert!((re - expect).abs() < 1e-15 && im == 0.0);
            } else {
                assert_eq!((re, im), (0.0, 0.0));
            }
        }
    }
}

#[test]
fn output_is_deterministic() {
    for format in ["json", "csv", "text"] {
        let args = ["green", "--eps", "-2.5", "0.3", "--N", "6", "--method", "both", "--output", format];
        let (a, b) = (jgreen(&args), jgreen(&args));
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout, "{format}");
    }
}

#[test]
fn csv_round_trips_json() {
    let base = ["green", "--eps", "-3", "1.5", "--N", "5"];
    let v = json(&jgreen(&base));
    let csv = jgreen(&[&base[..], &["--output", "csv"]].concat());
    let text = String::from_utf8(csv.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("i,j,re,im"));
    let mut count = 0;
    for line in lines {
        let f: Vec<&str> = line.split(',').collect();
        let (i, j): (usize, usize) = (f[0].parse().unwrap(), f[1].parse().unwrap());
        let (re, im): (f64, f64) = (f[2].parse().unwrap(), f[3].parse().unwrap());
        assert_eq!((re, im), complex(&v["result"]["matrix"]["values"][i][j]));
        count += 1;
    }
    assert_eq!(count, 25);
}

fn column<'a>(v: &'a Value, name: &str) -> &'a Value {
    v["result"]["table"]["variants"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == name)
        .unwrap()
}

fn row_value(col: &Value, n: usize) -> Option<(f64, f64)> {
    let r = &col["rows"][n - 1];
    Some((r["re"].as_f64()?, r["im"].as_f64()?))
}

#[test]
fn bound_region_table() {
    let out = jgreen(&["converge", "--bS", "5", "--eps", "-100", "0", "--depth", "40", "--variants", "zero,plus,minus"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let exact = complex(&v["result"]["table"]["exact"]);
    let err = |name: &str, n: usize| {
        let (re, im) = row_value(column(&v, name), n).unwrap();
        ((re - exact.0).powi(2) + (im - exact.1).powi(2)).sqrt() / exact.0.abs()
    };
    for name in ["zero", "plus", "minus"] {
        assert_eq!(column(&v, name)["status"], "converged");
        assert_eq!(column(&v, name)["rows"].as_array().unwrap().len(), 40);
        assert!(err(name, 40) < 1e-13);
    }
    for n in 2..8 {
        assert!(err("plus", n) < err("zero", n) && err("plus", n) < err("minus", n));
    }
}

#[test]
fn scattering_region_table() {
    let out = jgreen(&["converge", "--bS", "5", "--eps", "1000", "1", "--depth", "60"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(column(&v, "zero")["status"], "diverged");
    let exact = complex(&v["result"]["table"]["exact"]);
    let rel = |z: (f64, f64)| ((z.0 - exact.0).powi(2) + (z.1 - exact.1).powi(2)).sqrt() / exact.0.hypot(exact.1);
    assert!(rel(row_value(column(&v, "plus:8"), 60).unwrap()) < 1e-8);
    assert!(rel(row_value(column(&v, "plus"), 60).unwrap()) > 1e-3);
}

#[test]
fn degenerate_fixed_points_are_marked() {
    let out = jgreen(&["converge", "--eps", "0", "0", "--depth", "5", "--variants", "plus,zero"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let plus = column(&v, "plus");
    assert_eq!(plus["status"], "error");
    assert!(plus["reason"].as_str().unwrap().contains("degenerate"));
    assert!(plus["rows"].as_array().unwrap().iter().all(|r| r["diverged"] == true));
}

#[test]
fn validate_passes_by_default() {
    let out = jgreen(&["validate"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let checks = v["result"]["checks"].as_array().unwrap();
    assert!(checks.len() >= 10);
    assert!(checks.iter().all(|c| c["pass"] == true));
}

#[test]
fn validate_negative_control_fails() {
    let out = jgreen(&["validate", "--printed-charge-sign"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    let pole = v["result"]["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "pole_nr0")
        .unwrap();
    assert_eq!(pole["pass"], false);
}

#[test]
fn contour_through_the_cut_is_rejected() {
    let out = jgreen(&["validate", "--contour-center", "-0.2", "0", "--contour-rx", "0.3"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["error"]["kind"], "config");
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.cfg");
    std::fs::write(&path, "# run\nbS = 2\nN = 3\neps_re = -5\noutput = json\n").unwrap();
    let p = path.to_str().unwrap();
    let v = json(&jgreen(&["green", "--config", p, "--N", "4"]));
    assert_eq!(v["config"]["bS"], 2.0);
    assert_eq!(v["config"]["N"], 4);
    assert_eq!(v["config"]["eps_re"], -5.0);
    std::fs::write(&path, "bogus = 1\n").unwrap();
    assert_eq!(jgreen(&["green", "--config", p]).status.code(), Some(2));
}

#[test]
fn bad_flags_exit_2() {
    assert_eq!(jgreen(&["green", "--method", "C"]).status.code(), Some(2));
    assert_eq!(jgreen(&["green", "--N", "0"]).status.code(), Some(2));
    assert_eq!(jgreen(&["green", "--omega", "1"]).status.code(), Some(2));
    assert_eq!(jgreen(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn output_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.csv");
    let out = jgreen(&["green", "--N", "2", "--output", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(path).unwrap();
    assert_eq!(text.lines().count(), 5);
}
