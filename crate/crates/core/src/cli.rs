//! Command line front end.
//!
//! Exit status: 0 on success, 1 on I/O, format or usage errors, 2 when the
//! scenario fails validation, 3 when the pipeline fails.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;

use crate::error::{Error, Result};
use crate::forward::InversionMethod;
use crate::inverse::ComponentStrategy;
use crate::io::{self, ConfigFile, RunManifest};
use crate::metrics::{noise_sweep_from_clean, SweepConfig};
use crate::noise::NoiseModel;
use crate::pipeline::{
    add_noise, check_scenario, measurement_grid, reconstruct_and_score, run_from_clean, simulate,
    ExperimentOutcome, ExperimentSettings, ExperimentSummary,
};
use crate::plot;
use crate::presets::ExperimentPreset;
use crate::scenario::{Scenario, Severity};

#[derive(Debug, Parser)]
#[command(name = "movsrc", version, about = "Moving point source: forward synthesis and orbit reconstruction")]
pub struct Cli {
    /// More log output (-v info, -vv debug). RUST_LOG overrides.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Synthesize (optionally noisy) boundary traces.
    Simulate {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        noise: NoiseArgs,
        #[command(flatten)]
        tuning: TuningArgs,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Reconstruct the orbit from traces written by `simulate`.
    Reconstruct {
        /// Directory holding `run.toml` and `measurement_x{1..4}.csv`.
        #[arg(long)]
        data: PathBuf,
        #[command(flatten)]
        tuning: TuningArgs,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Simulate, add noise and reconstruct in one go.
    Experiment {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        noise: NoiseArgs,
        #[command(flatten)]
        tuning: TuningArgs,
        /// Skip writing the (large) trace files.
        #[arg(long)]
        no_measurements: bool,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Error against noise level, averaged over seeds, with a linear fit.
    Sweep {
        #[command(flatten)]
        source: SourceArgs,
        /// Comma separated noise levels; defaults to the preset's list.
        #[arg(long, value_delimiter = ',')]
        epsilons: Option<Vec<f64>>,
        #[arg(long, default_value_t = 5)]
        seeds_per_point: usize,
        #[arg(long, default_value_t = 1)]
        base_seed: u64,
        #[command(flatten)]
        tuning: TuningArgs,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Check a scenario against the standing assumptions.
    Validate {
        #[command(flatten)]
        source: SourceArgs,
    },
    /// Print a preset as a configuration file.
    Config {
        preset: ExperimentPreset,
    },
}

#[derive(Debug, Args)]
pub struct SourceArgs {
    /// One of line_example1, heart_example2, spiral_example3, spiral_lowspeed.
    #[arg(required_unless_present = "config", conflicts_with = "config")]
    pub preset: Option<ExperimentPreset>,
    /// Scenario file with a `[scenario]` and an optional `[settings]` table.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct NoiseArgs {
    #[arg(long, default_value_t = 0.0)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct TuningArgs {
    /// RK4 step in seconds.
    #[arg(long)]
    pub step: Option<f64>,
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
    #[arg(long, value_enum)]
    pub strategy: Option<StrategyArg>,
    /// Measurement sampling step in seconds.
    #[arg(long)]
    pub dt: Option<f64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MethodArg {
    Bisection,
    Digitscan,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum StrategyArg {
    Fixed,
    Maxsignal,
}

impl TuningArgs {
    fn apply(&self, settings: &mut ExperimentSettings) {
        if let Some(h) = self.step {
            settings.inverse.step = h;
        }
        if let Some(m) = self.method {
            settings.method = match m {
                MethodArg::Bisection => InversionMethod::Bisection,
                MethodArg::Digitscan => InversionMethod::DigitScan,
            };
        }
        if let Some(s) = self.strategy {
            let threshold = settings.inverse.strategy.fallback_threshold;
            settings.inverse.strategy = match s {
                StrategyArg::Fixed => ComponentStrategy::preset_fixed(),
                StrategyArg::Maxsignal => ComponentStrategy::max_signal(),
            }
            .with_fallback_threshold(threshold);
        }
        if let Some(dt) = self.dt {
            settings.measurement.dt = dt;
        }
    }
}

struct Resolved {
    preset: Option<ExperimentPreset>,
    scenario: Scenario,
    settings: ExperimentSettings,
}

impl Resolved {
    fn label(&self) -> String {
        self.preset.map_or_else(|| "custom".to_string(), |p| p.name().to_string())
    }
}

fn resolve(source: &SourceArgs, tuning: &TuningArgs) -> Result<Resolved> {
    let (preset, scenario, mut settings) = match (&source.preset, &source.config) {
        (Some(p), _) => (Some(*p), p.scenario(), p.settings()),
        (None, Some(path)) => {
            let cfg: ConfigFile = io::read_toml(path)?;
            let settings = cfg
                .settings
                .unwrap_or_else(|| ExperimentSettings::default_for(&cfg.scenario));
            (None, cfg.scenario, settings)
        }
        (None, None) => unreachable!("clap requires a preset or --config"),
    };
    tuning.apply(&mut settings);
    Ok(Resolved {
        preset,
        scenario,
        settings,
    })
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write_outcome(dir: &Path, summary: &ExperimentSummary, out: &ExperimentOutcome, title: &str) -> Result<()> {
    io::ensure_dir(dir)?;
    for d in &out.reconstruction.distances {
        io::write_distance_csv(&io::distance_path(dir, d.receiver_index), d)?;
    }
    io::write_orbit_csv(&dir.join("orbit_reconstructed.csv"), &out.reconstruction.orbit)?;
    io::write_orbit_csv(&dir.join("orbit_true.csv"), &out.truth)?;
    io::write_json(&dir.join("summary.json"), summary)?;
    let title = format!("{title}: epsilon = {:e}, Err = {:.3e}", summary.epsilon, summary.err);
    write_text(&dir.join("orbit.svg"), &plot::orbit_svg(&out.truth, &out.reconstruction.orbit, &title))
}

fn print_summary(summary: &ExperimentSummary) {
    for r in &summary.receivers {
        println!(
            "x{}  arrival {:.9e} s  fallbacks {}  max|dv/dt|/c {:.3e}",
            r.receiver, r.t_arrival, r.fallback_count, r.max_speed_ratio
        );
    }
    println!("Err = {:.6e}", summary.err);
}

fn cmd_simulate(source: &SourceArgs, noise: &NoiseArgs, tuning: &TuningArgs, out: &Path) -> Result<()> {
    let r = resolve(source, tuning)?;
    let clean = simulate(&r.scenario, &r.settings)?;
    let model = NoiseModel::new(noise.epsilon, noise.seed);
    let data = add_noise(&clean, &model);
    let manifest = RunManifest {
        preset: r.preset.map(|p| p.name().to_string()),
        noise: model,
        grid: clean[0].grid,
        settings: r.settings,
        scenario: r.scenario,
    };
    io::write_measurements(out, &data, &manifest)?;
    println!(
        "wrote 4 traces of {} samples (dt = {:e}) to {}",
        manifest.grid.n,
        manifest.grid.dt,
        out.display()
    );
    Ok(())
}

fn cmd_reconstruct(data_dir: &Path, tuning: &TuningArgs, out: &Path) -> Result<()> {
    let (mut manifest, data) = io::read_measurements(data_dir)?;
    tuning.apply(&mut manifest.settings);
    check_scenario(&manifest.scenario)?;
    let outcome = reconstruct_and_score(&data, &manifest.scenario, &manifest.settings, manifest.noise)?;
    let summary = ExperimentSummary::new(
        manifest.preset.clone(),
        &manifest.scenario,
        &manifest.settings,
        manifest.grid,
        &outcome,
    );
    write_outcome(out, &summary, &outcome, manifest.preset.as_deref().unwrap_or("custom"))?;
    print_summary(&summary);
    Ok(())
}

fn cmd_experiment(
    source: &SourceArgs,
    noise: &NoiseArgs,
    tuning: &TuningArgs,
    no_measurements: bool,
    out: &Path,
) -> Result<()> {
    let r = resolve(source, tuning)?;
    let clean = simulate(&r.scenario, &r.settings)?;
    let model = NoiseModel::new(noise.epsilon, noise.seed);
    let grid = clean[0].grid;
    if !no_measurements {
        let manifest = RunManifest {
            preset: r.preset.map(|p| p.name().to_string()),
            noise: model,
            grid,
            settings: r.settings,
            scenario: r.scenario.clone(),
        };
        io::write_measurements(out, &add_noise(&clean, &model), &manifest)?;
    }
    let outcome = run_from_clean(&clean, &r.scenario, &r.settings, model)?;
    let summary = ExperimentSummary::new(r.preset.map(|p| p.name().to_string()), &r.scenario, &r.settings, grid, &outcome);
    write_outcome(out, &summary, &outcome, &r.label())?;
    print_summary(&summary);
    Ok(())
}

fn cmd_sweep(
    source: &SourceArgs,
    epsilons: Option<Vec<f64>>,
    seeds_per_point: usize,
    base_seed: u64,
    tuning: &TuningArgs,
    out: &Path,
) -> Result<()> {
    let r = resolve(source, tuning)?;
    let epsilons = match (epsilons, r.preset) {
        (Some(e), _) => e,
        (None, Some(p)) => p.sweep_epsilons(),
        (None, None) => {
            return Err(Error::Config(crate::error::ConfigError::Invalid(
                "--epsilons is required with --config".into(),
            )))
        }
    };
    let cfg = SweepConfig {
        epsilons,
        seeds_per_point,
        base_seed,
    };
    let clean = simulate(&r.scenario, &r.settings)?;
    let result = noise_sweep_from_clean(&clean, &r.scenario, &r.settings, &cfg)?;
    io::ensure_dir(out)?;
    io::write_sweep_csv(&out.join("sweep.csv"), &result)?;
    let grid = measurement_grid(&r.scenario, &r.settings.measurement)?;
    let report = serde_json::json!({
        "preset": r.label(),
        "seeds_per_point": seeds_per_point,
        "base_seed": base_seed,
        "measurement_dt": grid.dt,
        "settings": r.settings,
        "slope": result.slope,
        "intercept": result.intercept,
        "max_relative_residual": result.max_relative_residual,
        "monotone": result.is_monotone(),
        "points": result.points,
        "failures": result.failures,
        "constants": crate::metrics::geometry_constants_on(&r.scenario, grid),
    });
    io::write_json(&out.join("sweep_summary.json"), &report)?;
    write_text(&out.join("sweep.svg"), &plot::sweep_svg(&result, &format!("{}: Err vs epsilon", r.label())))?;
    println!("{:>12}  {:>12}  {:>4}", "epsilon", "mean Err", "runs");
    for p in &result.points {
        println!("{:>12.4e}  {:>12.4e}  {:>4}", p.epsilon, p.err, p.runs);
    }
    println!(
        "slope {:.4e}  intercept {:.4e}  max relative residual {:.3}",
        result.slope, result.intercept, result.max_relative_residual
    );
    for f in &result.failures {
        println!("failed: epsilon {:e} seed {}: {}", f.epsilon, f.seed, f.message);
    }
    Ok(())
}

fn cmd_validate(source: &SourceArgs) -> Result<()> {
    let r = resolve(source, &TuningArgs::none())?;
    let rep = r.scenario.validate();
    for c in &rep.checks {
        let tag = match (c.passed, c.severity) {
            (true, _) => "ok",
            (false, Severity::Warning) => "WARN",
            (false, Severity::Fatal) => "FAIL",
        };
        println!("{tag:>4}  {:<36} measured {:.6e}  limit {:.6e}", c.name, c.measured, c.limit);
    }
    check_scenario(&r.scenario).map(|_| ())
}

impl TuningArgs {
    fn none() -> Self {
        Self {
            step: None,
            method: None,
            strategy: None,
            dt: None,
        }
    }
}

fn cmd_config(preset: ExperimentPreset) -> Result<()> {
    let cfg = ConfigFile {
        scenario: preset.scenario(),
        settings: Some(preset.settings()),
    };
    let text = toml::to_string(&cfg).map_err(|e| Error::Format {
        path: "<stdout>".into(),
        detail: e.to_string(),
    })?;
    print!("{text}");
    Ok(())
}

/// Maps an error to the process exit status.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Validation(_) | Error::Config(_) => 2,
        Error::Forward(_) | Error::Inverse(_) | Error::Metrics(_) | Error::Grid(_) => 3,
        Error::Io { .. } | Error::Format { .. } => 1,
    }
}

pub fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate {
            source,
            noise,
            tuning,
            out,
        } => cmd_simulate(&source, &noise, &tuning, &out),
        Command::Reconstruct { data, tuning, out } => cmd_reconstruct(&data, &tuning, &out),
        Command::Experiment {
            source,
            noise,
            tuning,
            no_measurements,
            out,
        } => cmd_experiment(&source, &noise, &tuning, no_measurements, &out),
        Command::Sweep {
            source,
            epsilons,
            seeds_per_point,
            base_seed,
            tuning,
            out,
        } => cmd_sweep(&source, epsilons, seeds_per_point, base_seed, &tuning, &out),
        Command::Validate { source } => cmd_validate(&source),
        Command::Config { preset } => cmd_config(preset),
    }
}

/// Parses `args`, runs the command and returns the exit status.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).try_init();
    info!("movsrc {}", env!("CARGO_PKG_VERSION"));
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
