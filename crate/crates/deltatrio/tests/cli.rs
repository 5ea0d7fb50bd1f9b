//! End-to-end tests of the command-line interface: flags, output formats,
//! exit codes and determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_deltatrio"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).to_string()
}

fn tmp_path(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("deltatrio-cli-{}-{name}", std::process::id()));
    p
}

#[test]
fn solve_reference_case_sector_structure() {
    let output = run(&[
        "solve",
        "--mass-ratio",
        "inf",
        "--charge",
        "1",
        "--k-max",
        "2",
        "--no-meta",
    ]);
    assert!(output.status.success(), "{output:?}");
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&output)).unwrap();
    let sectors = doc["sectors"].as_array().unwrap();
    assert_eq!(sectors.len(), 4);
    for sector in sectors {
        let name = sector["sector"].as_str().unwrap();
        let states = sector["bound_states"].as_array().unwrap();
        match name {
            "PP" => {
                assert!(!states.is_empty(), "PP sector must bind at Z = 1");
                let ground = &states[0];
                assert!(ground["k_star"].as_f64().unwrap() > 0.707);
                assert_eq!(ground["mass_ratio"].as_str().unwrap(), "inf");
                assert!(ground["E_dimensionless"].as_f64().unwrap() < -0.5);
            }
            _ => {
                assert!(states.is_empty(), "{name} should be empty");
                assert_eq!(sector["note"].as_str().unwrap(), "no bound state");
            }
        }
    }
}

#[test]
fn solve_single_sector_mm_is_empty() {
    let output = run(&[
        "solve",
        "--mass-ratio",
        "1",
        "--charge",
        "1",
        "--sector",
        "MM",
        "--k-max",
        "2",
        "--format",
        "csv",
        "--no-meta",
    ]);
    assert!(output.status.success());
    let text = stdout_of(&output);
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("sector,mass_ratio,Z,k_star"));
    let row = lines.next().unwrap();
    assert!(row.starts_with("MM,"));
    assert!(row.ends_with("no bound state"));
}

#[test]
fn solve_rejects_invalid_mass_ratio_with_usage_exit() {
    let output = run(&["solve", "--mass-ratio", "-1", "--charge", "1"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn critical_reproduces_the_reference_constant() {
    let output = run(&["critical", "--theta12", "1.5707963267948966", "--no-meta"]);
    assert!(output.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&output)).unwrap();
    let z = doc["z_c_ub"].as_f64().unwrap();
    assert!(
        (z - 0.3749034774700059).abs() < 1e-10,
        "z_c_ub = {z:.17} not at 10-digit agreement"
    );
    assert_eq!(doc["mass_ratio"].as_str().unwrap(), "inf");
}

#[test]
fn critical_extended_adds_more_digits() {
    let output = run(&["critical", "--mass-ratio", "inf", "--extended", "--no-meta"]);
    assert!(output.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&output)).unwrap();
    let ext = doc["z_c_ub_extended"].as_str().unwrap();
    assert!(
        ext.starts_with("0.37490347747000593278"),
        "extended root {ext} disagrees with the 20-digit reference"
    );
}

#[test]
fn curve_svg_writes_plot_and_csv_sidecar() {
    let svg_path = tmp_path("curve.svg");
    let output = run(&[
        "curve",
        "--theta-min",
        "1.5708",
        "--theta-max",
        "2.9",
        "--steps",
        "12",
        "--format",
        "svg",
        "--no-meta",
        "-o",
        svg_path.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "{output:?}");
    let svg = std::fs::read_to_string(&svg_path).unwrap();
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg.matches("<polyline").count(), 1);
    // Polyline x coordinates are monotone.
    let points_attr = svg
        .split("points=\"")
        .nth(1)
        .and_then(|s| s.split('"').next())
        .unwrap();
    let xs: Vec<f64> = points_attr
        .split_whitespace()
        .map(|pair| pair.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert!(xs.windows(2).all(|w| w[0] < w[1]));

    let csv_path = svg_path.with_extension("csv");
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "theta12_rad,mass_ratio,z_c_ub,k00_residual,quad_tol"
    );
    assert_eq!(lines.count(), 12);
    std::fs::remove_file(&svg_path).ok();
    std::fs::remove_file(&csv_path).ok();
}

#[test]
fn curve_csv_is_deterministic_without_meta() {
    let args = [
        "curve",
        "--theta-min",
        "1.6",
        "--theta-max",
        "2.2",
        "--steps",
        "4",
        "--no-meta",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(stdout_of(&a), stdout_of(&b));
    // Every float rendered with 17 significant digits, '.' decimal, ',' sep.
    let text = stdout_of(&a);
    let first_row = text.lines().nth(1).unwrap();
    for field in first_row.split(',') {
        assert!(field.contains('e') || field == "inf");
    }
}

#[test]
fn k00_sign_matches_the_critical_point() {
    let output = run(&["k00", "--mass-ratio", "inf", "--charge", "0.5", "--no-meta"]);
    assert!(output.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&output)).unwrap();
    assert!(doc["value"].as_f64().unwrap() > 0.0, "0.5 > Z_c^ub");
    assert!(doc["schur_term"].as_f64().unwrap() >= 0.0);
    let below = run(&["k00", "--mass-ratio", "inf", "--charge", "0.2", "--no-meta"]);
    let doc_below: serde_json::Value = serde_json::from_str(&stdout_of(&below)).unwrap();
    assert!(doc_below["value"].as_f64().unwrap() < 0.0, "0.2 < Z_c^ub");
}

#[test]
fn verify_writes_a_valid_report() {
    let report_path = tmp_path("report.json");
    let output = run(&[
        "verify",
        "--grid-n",
        "300",
        "--no-oracle",
        "--report",
        report_path.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "verify failed: {output:?}");
    let text = stdout_of(&output);
    assert!(text.lines().filter(|l| l.starts_with("PASS:")).count() >= 10);
    assert_eq!(text.lines().filter(|l| l.starts_with("FAIL:")).count(), 0);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    assert_eq!(report["all_passed"].as_bool(), Some(true));
    let checks = report["checks"].as_array().unwrap();
    for check in checks {
        assert!(check["name"].is_string());
        assert!(check["claim"].is_string());
        assert!(check["computed"].is_array());
        assert!(check["passed"].is_boolean());
        assert!(check["tolerance"].is_number());
    }
    std::fs::remove_file(&report_path).ok();
}

#[test]
fn kernel_dump_emits_labeled_matrix() {
    let output = run(&["kernel-dump", "--kernel", "tilde-mm", "--grid-n", "16"]);
    assert!(output.status.success());
    let text = stdout_of(&output);
    let mut lines = text.lines();
    let meta = lines.next().unwrap();
    assert!(meta.starts_with("# deltatrio kernel-dump"));
    assert!(meta.contains("grid_n=16"));
    let header = lines.next().unwrap();
    assert_eq!(header.split(',').count(), 16);
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 16);
    assert_eq!(rows[0].split(',').count(), 16);

    // Even/odd dumps need --theta.
    let missing = run(&["kernel-dump", "--kernel", "even", "--grid-n", "8"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn thread_cap_env_var() {
    let ok = bin()
        .env("SKELETON_THREADS", "2")
        .args(["k00", "--mass-ratio", "1", "--charge", "1", "--no-meta"])
        .output()
        .unwrap();
    assert!(ok.status.success());
    let bad = bin()
        .env("SKELETON_THREADS", "zero")
        .args(["k00", "--mass-ratio", "1", "--charge", "1"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
