use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use movsrc::io::{read_json, read_orbit_csv};
use movsrc::pipeline::ExperimentSummary;

const TETRAHEDRON: &str = "
    { position = [57.735026918962575, 57.735026918962575, 57.735026918962575] },
    { position = [-57.735026918962575, -57.735026918962575, 57.735026918962575] },
    { position = [57.735026918962575, -57.735026918962575, -57.735026918962575] },
    { position = [-57.735026918962575, 57.735026918962575, -57.735026918962575] },
";

const SMALL: &str = r#"
[scenario]
c = 340
R_gamma = 100.0
R_D = 5.0
T0 = 1.0
T1 = 0.4
T = 1.4
receivers = [RECEIVERS]

[scenario.orbit]
kind = "spiral"
params = [2.0, 3.0, 1.0]
declared_c0 = 6.1
declared_a0 = 18.0

[[scenario.signal.components]]
poly = [1.0]
[[scenario.signal.components]]
poly = [15.0]
sines = [[10.0, 100.0, 0.0]]
[[scenario.signal.components]]
poly = [-1.0, 0.0, -1.0]
"#;

fn movsrc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_movsrc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn write_config(dir: &Path, name: &str, receivers: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, SMALL.replace("RECEIVERS", receivers)).unwrap();
    p
}

fn small_config(dir: &Path) -> PathBuf {
    write_config(dir, "small.toml", TETRAHEDRON)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn experiment_writes_all_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path());
    let out = dir.path().join("run");
    let o = movsrc(&["experiment", "--config", s(&cfg), "--epsilon", "1e-3", "--seed", "3", "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    for f in [
        "summary.json",
        "orbit_reconstructed.csv",
        "orbit_true.csv",
        "orbit.svg",
        "run.toml",
        "distance_x1.csv",
        "distance_x4.csv",
        "measurement_x1.csv",
        "measurement_x4.csv",
    ] {
        assert!(out.join(f).is_file(), "missing {f}");
    }
    let summary: ExperimentSummary = read_json(&out.join("summary.json")).unwrap();
    assert_eq!(summary.seed, 3);
    assert_eq!(summary.receivers.len(), 4);
    assert!(summary.err.is_finite() && summary.err < 0.5, "err {}", summary.err);
    let orbit = read_orbit_csv(&out.join("orbit_reconstructed.csv")).unwrap();
    assert!(orbit.len() > 100);
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path());
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        let o = movsrc(&["experiment", "--config", s(&cfg), "--epsilon", "0.01", "--seed", "9", "--out", s(out)]);
        assert_eq!(code(&o), 0);
    }
    for f in ["orbit_reconstructed.csv", "distance_x2.csv", "measurement_x3.csv", "summary.json"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f} differs");
    }
}

#[test]
fn simulate_then_reconstruct_matches_experiment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path());
    let data = dir.path().join("data");
    let split = dir.path().join("split");
    let whole = dir.path().join("whole");
    let noise = ["--epsilon", "0.02", "--seed", "5"];

    let mut args = vec!["simulate", "--config", s(&cfg), "--out", s(&data)];
    args.extend(noise);
    assert_eq!(code(&movsrc(&args)), 0);
    assert_eq!(code(&movsrc(&["reconstruct", "--data", s(&data), "--out", s(&split)])), 0);
    let mut args = vec!["experiment", "--config", s(&cfg), "--out", s(&whole), "--no-measurements"];
    args.extend(noise);
    assert_eq!(code(&movsrc(&args)), 0);

    for f in ["orbit_reconstructed.csv", "summary.json"] {
        assert_eq!(fs::read(split.join(f)).unwrap(), fs::read(whole.join(f)).unwrap(), "{f} differs");
    }
    assert!(!whole.join("measurement_x1.csv").exists());
}

#[test]
fn sweep_writes_table_and_fit() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path());
    let out = dir.path().join("sweep");
    let o = movsrc(&[
        "sweep",
        "--config",
        s(&cfg),
        "--epsilons",
        "0.01,0.02",
        "--seeds-per-point",
        "2",
        "--out",
        s(&out),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let table = fs::read_to_string(out.join("sweep.csv")).unwrap();
    // header, the noise-free run and two seeds at each level
    assert_eq!(table.lines().count(), 1 + 1 + 4);
    assert!(out.join("sweep_summary.json").is_file());
    assert!(out.join("sweep.svg").is_file());
}

#[test]
fn config_output_round_trips_through_validate() {
    let dir = tempfile::tempdir().unwrap();
    let o = movsrc(&["config", "heart_example2"]);
    assert_eq!(code(&o), 0);
    let p = dir.path().join("heart.toml");
    fs::write(&p, &o.stdout).unwrap();
    let o = movsrc(&["validate", "--config", s(&p)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path());
    let out = dir.path().join("x");

    // usage and I/O problems
    assert_eq!(code(&movsrc(&["validate", "no_such_preset"])), 1);
    assert_eq!(code(&movsrc(&["validate", "--config", "/nonexistent/cfg.toml"])), 1);
    assert_eq!(code(&movsrc(&["reconstruct", "--data", s(&dir.path().join("empty")), "--out", s(&out)])), 1);

    // coplanar receivers fail validation
    let flat = write_config(
        dir.path(),
        "flat.toml",
        "{ position = [100.0, 0.0, 0.0] }, { position = [0.0, 100.0, 0.0] },
         { position = [-100.0, 0.0, 0.0] }, { position = [0.0, -100.0, 0.0] }",
    );
    let o = movsrc(&["validate", "--config", s(&flat)]);
    assert_eq!(code(&o), 2, "{}", String::from_utf8_lossy(&o.stderr));

    // an RK4 step longer than the orbit interval
    let o = movsrc(&["experiment", "--config", s(&cfg), "--step", "5", "--out", s(&out)]);
    assert_eq!(code(&o), 3);
}
