//! Forward simulation, noise and reconstruction chained into one experiment.

use log::info;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forward::{sample_receiver, GInversionConfig, InversionMethod};
use crate::geometry::TimeGrid;
use crate::inverse::{reconstruct, ComponentStrategy, reconstruction_grid, InverseSettings, Reconstruction, ReconstructedOrbit};
use crate::metrics::{geometry_constants_on, relative_error, sample_true_orbit, GeometryConstants};
use crate::noise::{apply_noise, NoiseModel};
use crate::scenario::{Scenario, ValidationReport};
use crate::series::TimeSeries;

/// How the boundary traces are sampled.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementPlan {
    pub dt: f64,
    /// Start the record just before the earliest possible arrival
    /// `(R_gamma - R_D) / c` instead of at `t = 0`.
    #[serde(default)]
    pub windowed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSettings {
    pub method: InversionMethod,
    pub measurement: MeasurementPlan,
    pub inverse: InverseSettings,
}

impl ExperimentSettings {
    /// Defaults for a scenario without explicit settings: a power-of-ten RK4
    /// step giving at least 1000 steps over `[0, T0]`, traces sampled at
    /// half that step, max-signal component selection.
    pub fn default_for(s: &Scenario) -> Self {
        let step = 10f64.powf((s.t0 / 1000.0).log10().floor());
        Self {
            method: InversionMethod::Bisection,
            measurement: MeasurementPlan {
                dt: step / 2.0,
                windowed: false,
            },
            inverse: InverseSettings::new(ComponentStrategy::max_signal(), step),
        }
    }

    pub fn inversion_config(&self, s: &Scenario) -> GInversionConfig {
        GInversionConfig::with_method(self.method, s.t_total)
    }
}

/// Sampling grid of the traces. The record always ends at or after `T`.
pub fn measurement_grid(s: &Scenario, plan: &MeasurementPlan) -> Result<TimeGrid> {
    let t_start = if plan.windowed {
        let earliest = (s.r_gamma - s.r_d) / s.c;
        // one silent sample before the earliest arrival
        ((earliest / plan.dt).floor() - 1.0).max(0.0) * plan.dt
    } else {
        0.0
    };
    Ok(TimeGrid::covering(t_start, s.t_total, plan.dt)?)
}

/// Fails on fatal validation failures and returns the report otherwise.
pub fn check_scenario(s: &Scenario) -> Result<ValidationReport> {
    let rep = s.validate();
    if rep.has_fatal() {
        let msg = rep
            .fatal_failures()
            .map(|c| c.name.clone())
            .collect::<Vec<_>>()
            .join(", ");
        return Err(Error::Validation(msg));
    }
    for c in rep.failures() {
        log::warn!("VALIDATION {}: measured {:e}, limit {:e}", c.name, c.measured, c.limit);
    }
    Ok(rep)
}

/// Noise-free traces at the four receivers.
pub fn simulate(s: &Scenario, settings: &ExperimentSettings) -> Result<[TimeSeries; 4]> {
    check_scenario(s)?;
    let grid = measurement_grid(s, &settings.measurement)?;
    let cfg = settings.inversion_config(s);
    info!(
        "simulating {} samples per receiver, dt = {:e}",
        grid.n, grid.dt
    );
    let mut out = Vec::with_capacity(4);
    for j in 0..4 {
        out.push(sample_receiver(s, j, grid, &cfg)?);
    }
    Ok(out.try_into().expect("four receivers"))
}

pub fn add_noise(clean: &[TimeSeries; 4], noise: &NoiseModel) -> [TimeSeries; 4] {
    [0, 1, 2, 3].map(|j| apply_noise(&clean[j], noise))
}

/// Result of one reconstruction scored against the true orbit.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutcome {
    pub noise: NoiseModel,
    pub reconstruction: Reconstruction,
    pub truth: ReconstructedOrbit,
    pub err: f64,
}

/// Reconstructs from already measured traces and scores the result.
pub fn reconstruct_and_score(
    data: &[TimeSeries; 4],
    s: &Scenario,
    settings: &ExperimentSettings,
    noise: NoiseModel,
) -> Result<ExperimentOutcome> {
    let grid = reconstruction_grid(s.t0, settings.inverse.step)?;
    let reconstruction = reconstruct(data, s, grid, &settings.inverse)?;
    let truth = sample_true_orbit(s, grid);
    let err = relative_error(&truth, &reconstruction.orbit)?;
    Ok(ExperimentOutcome {
        noise,
        reconstruction,
        truth,
        err,
    })
}

/// Noise followed by reconstruction, starting from clean traces.
pub fn run_from_clean(
    clean: &[TimeSeries; 4],
    s: &Scenario,
    settings: &ExperimentSettings,
    noise: NoiseModel,
) -> Result<ExperimentOutcome> {
    if noise.is_identity() {
        return reconstruct_and_score(clean, s, settings, noise);
    }
    reconstruct_and_score(&add_noise(clean, &noise), s, settings, noise)
}

/// The whole chain: simulate, add noise, reconstruct, score.
pub fn run_experiment(s: &Scenario, settings: &ExperimentSettings, noise: NoiseModel) -> Result<ExperimentOutcome> {
    let clean = simulate(s, settings)?;
    run_from_clean(&clean, s, settings, noise)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReceiverSummary {
    pub receiver: usize,
    pub t_arrival: f64,
    pub detection_index: usize,
    pub fallback_count: usize,
    pub max_speed_ratio: f64,
    pub speed_bound_violations: usize,
}

/// Machine-readable record of one experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSummary {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    pub epsilon: f64,
    pub seed: u64,
    pub err: f64,
    pub c: f64,
    pub t0: f64,
    pub t_total: f64,
    pub measurement_t_start: f64,
    pub measurement_dt: f64,
    pub samples_per_receiver: usize,
    pub settings: ExperimentSettings,
    pub receivers: Vec<ReceiverSummary>,
    pub constants: GeometryConstants,
}

impl ExperimentSummary {
    pub fn new(
        preset: Option<String>,
        s: &Scenario,
        settings: &ExperimentSettings,
        measurement: TimeGrid,
        out: &ExperimentOutcome,
    ) -> Self {
        let r = &out.reconstruction;
        let receivers = (0..4)
            .map(|j| {
                let d = &r.distances[j].diagnostics;
                ReceiverSummary {
                    receiver: j + 1,
                    t_arrival: r.arrivals[j].t_arrival,
                    detection_index: r.arrivals[j].detection_index,
                    fallback_count: d.fallback_count,
                    max_speed_ratio: d.max_speed_ratio,
                    speed_bound_violations: d.speed_bound_violations,
                }
            })
            .collect();
        Self {
            preset,
            epsilon: out.noise.epsilon,
            seed: out.noise.seed,
            err: out.err,
            c: s.c,
            t0: s.t0,
            t_total: s.t_total,
            measurement_t_start: measurement.t_start,
            measurement_dt: measurement.dt,
            samples_per_receiver: measurement.n,
            settings: *settings,
            receivers,
            constants: geometry_constants_on(s, measurement),
        }
    }
}
