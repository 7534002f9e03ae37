use std::fs;
use std::process::{Command, Output};

use flatspace_cli::report::RESULT_COLUMNS;
use flatspace_cli::{run, Preset, RunReport, Scenario};

fn flatspace(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flatspace")).args(args).output().expect("binary runs")
}

fn report(args: &[&str]) -> RunReport {
    let out = flatspace(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is a report")
}

fn value(r: &RunReport, model: &str, quantity: &str) -> f64 {
    r.find(model, quantity).unwrap_or_else(|| panic!("missing {model}/{quantity}")).value
}

#[test]
fn echo_delay_solar() {
    let r = report(&["echo-delay", "--preset", "solar"]);
    let us = value(&r, "flatspace-weber", "delay_quadrature_us");
    assert!((us / 220.0 - 1.0).abs() < 0.02, "{us}");
}

#[test]
fn density_at_energy_radius() {
    let r = report(&["density", "--r-over-ro", "1"]);
    assert_eq!(value(&r, "flatspace-weber", "enclosed_fraction[r_over_ro=1]"), 0.5);
}

#[test]
fn orbit_writes_trajectory_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let r = report(&["orbit", "--preset", "mercury", "--orbits", "10", "--out", out]);
    let numeric = value(&r, "flatspace-weber", "precession_numeric");
    let analytic = value(&r, "flatspace-weber", "precession_analytic");
    assert!((numeric / analytic - 1.0).abs() < 5e-3);
    let csv = fs::read_to_string(dir.path().join("trajectory.csv")).unwrap();
    assert!(csv.starts_with("phi_rad,r_m,u_per_m,du_dphi_per_m\n"));
    assert!(csv.lines().count() > 100);
    let saved: RunReport = serde_json::from_str(&fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(saved, r);
    let results = fs::read_to_string(dir.path().join("results.csv")).unwrap();
    assert_eq!(results.lines().next().unwrap(), RESULT_COLUMNS.join(","));
}

#[test]
fn output_is_deterministic() {
    let a = flatspace(&["compare", "--preset", "mercury"]);
    let b = flatspace(&["compare", "--preset", "mercury"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn config_echo_reproduces_run() {
    let dir = tempfile::tempdir().unwrap();
    let first = flatspace(&["light-deflect", "--preset", "solar", "--tol", "1e-9"]);
    assert!(first.status.success());
    let path = dir.path().join("report.json");
    fs::write(&path, &first.stdout).unwrap();
    let second = flatspace(&["light-deflect", "--config", path.to_str().unwrap()]);
    assert_eq!(first.stdout, second.stdout);

    let r: RunReport = serde_json::from_slice(&first.stdout).unwrap();
    let echo = serde_json::to_string(&r.config).unwrap();
    assert_eq!(Scenario::from_json(&echo).unwrap(), r.config);
}

#[test]
fn compare_rows_name_both_models() {
    let r = report(&["compare", "--preset", "solar"]);
    let comparisons: Vec<_> = r.results.iter().filter(|row| row.model.contains(" vs ")).collect();
    assert_eq!(comparisons.len(), 3);
    for row in comparisons {
        assert!(row.model.contains("flatspace-weber") && row.model.contains("schwarzschild"));
        assert!(!row.unit.is_empty());
    }
    assert!(r.results.iter().all(|row| !row.unit.is_empty()));
}

#[test]
fn invalid_input_exits_two() {
    assert_eq!(flatspace(&["precession", "--preset", "jupiter"]).status.code(), Some(2));
    assert_eq!(flatspace(&["gyro", "--model", "newtonian"]).status.code(), Some(2));
    assert_eq!(flatspace(&["orbit", "--tol", "-1"]).status.code(), Some(2));
    assert_eq!(flatspace(&["orbit", "--bogus"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, r#"{"eccentricity": 1.5}"#).unwrap();
    assert_eq!(flatspace(&["orbit", "--config", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn numerical_failure_exits_three() {
    // perihelion inside r = 3 r_o: the rosette denominator changes sign
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("deep.json");
    fs::write(&path, r#"{"r_o": 1.0, "semi_major_axis": 4.0, "eccentricity": 0.5}"#).unwrap();
    let out = flatspace(&["precession", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn csv_format_on_stdout() {
    let out = flatspace(&["electric", "--preset", "electron", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let headers = rdr.headers().unwrap().clone();
    assert_eq!(headers.iter().collect::<Vec<_>>(), RESULT_COLUMNS);
    let rows: Vec<_> = rdr.records().map(|r| r.unwrap()).collect();
    let charge = rows.iter().find(|r| &r[2] == "total_charge").unwrap();
    assert!((charge[3].parse::<f64>().unwrap() + 1.0).abs() < 1e-8);
}

#[test]
fn library_and_binary_agree() {
    let lib = run("echo-delay", &Preset::Solar.scenario()).unwrap();
    let bin = report(&["echo-delay", "--preset", "solar"]);
    assert_eq!(lib, bin);
}

mod weak_field {
    use flatspace_cli::baseline::{observable, Quantity};
    use flatspace_cli::{Model, Preset, Scenario};
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn flatspace_and_schwarzschild_agree(r_o in 1.0f64..1e4, big_r in 1e8f64..1e10) {
            let s = Scenario { r_o, body_radius: big_r, ..Preset::Solar.scenario() };
            for q in [Quantity::Deflection, Quantity::Delay] {
                let (a, _) = observable(Model::FlatspaceWeber, q, &s).unwrap();
                let (b, _) = observable(Model::Schwarzschild, q, &s).unwrap();
                prop_assert!((a / b - 1.0).abs() < 1e-3, "{q}: {a} vs {b}");
            }
        }
    }
}
