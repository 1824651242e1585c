//! End-to-end runs of the `riesz-gas` binary.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_riesz-gas"));
    c.env_remove("RIESZ_GAS_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("run.conf");
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

const SMALL_RUN: &str = "n = 3\nalpha = 1\ngamma = 2\nmass = 12\nwidth = 1\ncells = 32\nt_final = 0.05\nforce_path = coulomb-local\n";

#[test]
fn simulate_without_config_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["simulate", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--config"));
}

#[test]
fn malformed_config_and_bad_flags_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "n = 3\ncolour = blue\n");
    assert_eq!(
        run(&[
            "steady",
            "--config",
            &cfg,
            "--out",
            dir.path().to_str().unwrap()
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    let missing = dir.path().join("absent.conf");
    assert_eq!(
        run(&["steady", "--config", missing.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn phase_diagram_row_twenty() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["phase-diagram", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("phase_diagram.csv")).unwrap();
    let mut lines = text.lines();
    assert!(lines
        .next()
        .unwrap()
        .starts_with("# riesz-gas 0.1.0 manifest "));
    assert_eq!(lines.next().unwrap(), "n,alpha_minus,alpha_plus");
    assert!(text
        .lines()
        .any(|l| l == "20,4.0000000000000000e0,5.0000000000000000e0"));
    assert!(text.lines().any(|l| l == "19,,"));
    assert_eq!(text.lines().count(), 2 + 199);
}

#[test]
fn simulate_writes_stamped_deterministic_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL_RUN);
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for d in [&a, &b] {
        let out = run(&[
            "simulate",
            "--config",
            &cfg,
            "--out",
            d.to_str().unwrap(),
            "--threads",
            "1",
        ]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    for name in ["diagnostics.csv", "snapshots.json"] {
        assert_eq!(
            std::fs::read(a.join(name)).unwrap(),
            std::fs::read(b.join(name)).unwrap(),
            "{name}"
        );
    }
    let csv = std::fs::read_to_string(a.join("diagnostics.csv")).unwrap();
    let header = csv.lines().nth(1).unwrap();
    assert_eq!(
        header,
        "t,mass,E_kin,E_int,E_pot,E_tot,bd_entropy,boundary_pressure,b_t,min_rho,dissipation_rate"
    );
    let hash = csv
        .lines()
        .next()
        .unwrap()
        .split_whitespace()
        .nth(4)
        .unwrap()
        .to_string();
    let json: serde_json::Value =
        serde_json::from_slice(&std::fs::read(a.join("snapshots.json")).unwrap()).unwrap();
    assert_eq!(json["manifest"]["hash"], hash.as_str());
    let snap = &json["snapshots"][0];
    for key in ["x", "r", "rho", "u"] {
        assert!(snap[key].is_array(), "{key}");
    }
}

#[test]
fn thread_environment_overrides_the_flag() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .env("RIESZ_GAS_THREADS", "zero")
        .args([
            "phase-diagram",
            "--threads",
            "1",
            "--out",
            dir.path().to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let ok = bin()
        .env("RIESZ_GAS_THREADS", "1")
        .args([
            "phase-diagram",
            "--threads",
            "0",
            "--out",
            dir.path().to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
}

#[test]
fn step_cap_reports_non_convergence_and_keeps_partial_output() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        &format!("{SMALL_RUN}max_steps = 3\noutput_every = 1\n"),
    );
    let out = run(&[
        "simulate",
        "--config",
        &cfg,
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(4));
    let csv = std::fs::read_to_string(dir.path().join("diagnostics.csv")).unwrap();
    assert!(csv.lines().count() >= 3);
}

#[test]
fn steady_state_json_has_the_documented_fields() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "n = 3\nalpha = 1\ngamma = 2\nmass = 2\nr_max = 0.6\ngrid_points = 121\n",
    );
    let out = run(&[
        "steady",
        "--config",
        &cfg,
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let json: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("steady_state.json")).unwrap())
            .unwrap();
    for key in [
        "r",
        "rho",
        "lambda",
        "support_radius",
        "free_energy",
        "mass",
    ] {
        assert!(!json[key].is_null(), "{key}");
    }
    let radius = json["support_radius"].as_f64().unwrap();
    assert!(
        (radius - std::f64::consts::PI.sqrt() / 4.0).abs() < 2e-3,
        "{radius}"
    );
}

#[test]
fn critical_mass_and_kernel_table_run_without_config() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    assert_eq!(run(&["critical-mass", "--out", d]).status.code(), Some(0));
    assert_eq!(run(&["kernel-table", "--out", d]).status.code(), Some(0));
    let json: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("critical_mass.json")).unwrap())
            .unwrap();
    let b = json["report"]["b"].as_f64().unwrap();
    assert!((b - 8.0 * riesz_gas::functionals::hls_constant(3, 1.0).unwrap()).abs() < 1e-12 * b);
    let table = std::fs::read_to_string(dir.path().join("kernel_table.csv")).unwrap();
    assert_eq!(table.lines().count(), 2 + 400);
}
