//! Builds a scenario from a TOML description instead of a preset: a slow
//! sound source on a small spiral, heard by four microphones.

use movsrc::io::ConfigFile;
use movsrc::pipeline::{run_experiment, ExperimentSettings};
use movsrc::NoiseModel;

const CONFIG: &str = r#"
[scenario]
c = 340
R_gamma = 100.0
R_D = 5.0
T0 = 1.0
T1 = 0.4
T = 1.4
receivers = [
    { position = [57.735026918962575, 57.735026918962575, 57.735026918962575] },
    { position = [-57.735026918962575, -57.735026918962575, 57.735026918962575] },
    { position = [57.735026918962575, -57.735026918962575, -57.735026918962575] },
    { position = [-57.735026918962575, 57.735026918962575, -57.735026918962575] },
]

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

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg: ConfigFile = toml::from_str(CONFIG)?;
    let s = cfg.scenario;
    let mut settings = cfg.settings.unwrap_or_else(|| ExperimentSettings::default_for(&s));
    let report = s.validate();
    println!(
        "validation: {}",
        if report.all_passed() { "all checks passed".to_string() } else { report.summary() }
    );

    for dt in [settings.measurement.dt, 1e-5] {
        settings.measurement.dt = dt;
        for eps in [0.0, 0.01] {
            let out = run_experiment(&s, &settings, NoiseModel::new(eps, 1))?;
            println!("dt {dt:.0e}, epsilon {eps:>4}: Err = {:.4e}", out.err);
        }
    }
    Ok(())
}
