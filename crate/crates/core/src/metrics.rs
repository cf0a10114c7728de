//! Reconstruction error, geometric constants of the setup and the
//! error-versus-noise sweep.

use std::f64::consts::PI;

use log::{info, warn};
use serde::{Deserialize, Serialize};

use crate::error::MetricsError;
use crate::geometry::TimeGrid;
use crate::inverse::ReconstructedOrbit;
use crate::noise::NoiseModel;
use crate::pipeline::{run_from_clean, simulate, ExperimentSettings};
use crate::scenario::Scenario;
use crate::series::TimeSeries;

/// The true orbit sampled on `grid`.
pub fn sample_true_orbit(s: &Scenario, grid: TimeGrid) -> ReconstructedOrbit {
    ReconstructedOrbit {
        grid,
        points: grid.times().map(|t| s.orbit.position(t)).collect(),
    }
}

/// `max_{i,k} |a~_i(t_k) - a_i(t_k)| / max_{i,k} |a_i(t_k)|`.
pub fn relative_error(truth: &ReconstructedOrbit, recon: &ReconstructedOrbit) -> Result<f64, MetricsError> {
    if truth.grid != recon.grid || truth.points.len() != recon.points.len() {
        return Err(MetricsError::GridMismatch(format!(
            "{} true points vs {} reconstructed",
            truth.points.len(),
            recon.points.len()
        )));
    }
    let den = truth.points.iter().map(|p| p.norm_inf()).fold(0.0, f64::max);
    if !(den > 0.0) {
        return Err(MetricsError::UndefinedMetric);
    }
    let num = truth
        .points
        .iter()
        .zip(&recon.points)
        .map(|(a, b)| (*b - *a).norm_inf())
        .fold(0.0, |m: f64, e| if e.is_nan() { f64::NAN } else { m.max(e) });
    Ok(num / den)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometryConstants {
    /// Largest receiver-to-domain distance.
    pub d0: f64,
    /// Smallest receiver-to-domain distance.
    pub d1: f64,
    pub t1: f64,
    /// `min_t min_j ||f(t) x nu_j||_inf`.
    pub eta: f64,
    /// Arrival-time stability constant; infinite when `eta = 0`.
    pub c0: f64,
}

/// `12 pi d0 (c + c0) T / (c eta)`.
pub fn stability_constant_c0(d0: f64, c: f64, c0: f64, t: f64, eta: f64) -> f64 {
    if eta > 0.0 {
        12.0 * PI * d0 * (c + c0) * t / (c * eta)
    } else {
        f64::INFINITY
    }
}

/// Constants of the sphere geometry, with `eta` taken over `grid`.
pub fn geometry_constants_on(s: &Scenario, grid: TimeGrid) -> GeometryConstants {
    let d0 = s.r_gamma + s.r_d;
    let d1 = s.r_gamma - s.r_d;
    let eta = grid
        .times()
        .flat_map(|t| {
            let f = s.signal.value(t);
            s.receivers.iter().map(move |r| f.cross(r.normal).norm_inf())
        })
        .fold(f64::INFINITY, f64::min);
    GeometryConstants {
        d0,
        d1,
        t1: d0 / s.c,
        eta,
        c0: stability_constant_c0(d0, s.c, s.orbit.declared_c0, s.t_total, eta),
    }
}

/// [`geometry_constants_on`] with 100 001 points over `[0, T]`.
pub fn geometry_constants(s: &Scenario) -> GeometryConstants {
    let grid = TimeGrid::new(0.0, s.t_total / 100_000.0, 100_001).expect("positive horizon");
    geometry_constants_on(s, grid)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub epsilons: Vec<f64>,
    pub seeds_per_point: usize,
    /// Seeds are `base_seed..base_seed + seeds_per_point`, shared by all
    /// noise levels.
    pub base_seed: u64,
}

impl SweepConfig {
    pub fn new(epsilons: Vec<f64>, seeds_per_point: usize) -> Self {
        Self {
            epsilons,
            seeds_per_point,
            base_seed: 1,
        }
    }

    pub fn seeds(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.seeds_per_point as u64).map(move |k| self.base_seed + k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRun {
    pub epsilon: f64,
    pub seed: u64,
    pub err: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub epsilon: f64,
    /// Mean over the successful seeds.
    pub err: f64,
    pub runs: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepFailure {
    pub epsilon: f64,
    pub seed: u64,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseSweepResult {
    /// Sorted by `epsilon`; always contains the noise-free point.
    pub points: Vec<SweepPoint>,
    pub runs: Vec<SweepRun>,
    pub failures: Vec<SweepFailure>,
    pub slope: f64,
    pub intercept: f64,
    /// `max |fit - err| / err` over the noisy points.
    pub max_relative_residual: f64,
}

impl NoiseSweepResult {
    pub fn err_at(&self, epsilon: f64) -> Option<f64> {
        self.points.iter().find(|p| p.epsilon == epsilon).map(|p| p.err)
    }

    pub fn baseline(&self) -> f64 {
        self.err_at(0.0).unwrap_or(f64::NAN)
    }

    pub fn is_monotone(&self) -> bool {
        self.points.windows(2).all(|w| w[1].err >= w[0].err)
    }
}

/// Ordinary least squares `y = slope x + intercept`. With fewer than two
/// distinct abscissae the slope is zero and the intercept is the mean.
pub fn linear_fit(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    if points.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return (0.0, my);
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Runs the sweep on already simulated clean traces.
pub fn noise_sweep_from_clean(
    clean: &[TimeSeries; 4],
    s: &Scenario,
    settings: &ExperimentSettings,
    cfg: &SweepConfig,
) -> Result<NoiseSweepResult, MetricsError> {
    if cfg.epsilons.iter().any(|e| !(*e >= 0.0 && e.is_finite())) {
        return Err(MetricsError::InvalidSweep("noise levels must be finite and non-negative".into()));
    }
    if cfg.seeds_per_point == 0 {
        return Err(MetricsError::InvalidSweep("need at least one seed per point".into()));
    }
    let mut levels = cfg.epsilons.clone();
    levels.push(0.0);
    levels.sort_by(f64::total_cmp);
    levels.dedup();

    let mut runs = Vec::new();
    let mut failures = Vec::new();
    let mut points = Vec::new();
    for &epsilon in &levels {
        // the noise-free run does not depend on the seed
        let seeds: Vec<u64> = if epsilon == 0.0 {
            vec![cfg.base_seed]
        } else {
            cfg.seeds().collect()
        };
        let mut errs = Vec::new();
        for seed in seeds {
            match run_from_clean(clean, s, settings, NoiseModel::new(epsilon, seed)) {
                Ok(out) => {
                    info!("SWEEP epsilon={epsilon:e} seed={seed} err={:e}", out.err);
                    runs.push(SweepRun {
                        epsilon,
                        seed,
                        err: out.err,
                    });
                    errs.push(out.err);
                }
                Err(e) => {
                    warn!("SWEEP_FAILURE epsilon={epsilon:e} seed={seed}: {e}");
                    failures.push(SweepFailure {
                        epsilon,
                        seed,
                        message: e.to_string(),
                    });
                }
            }
        }
        if !errs.is_empty() {
            points.push(SweepPoint {
                epsilon,
                err: errs.iter().sum::<f64>() / errs.len() as f64,
                runs: errs.len(),
            });
        }
    }

    let xy: Vec<(f64, f64)> = points.iter().map(|p| (p.epsilon, p.err)).collect();
    let (slope, intercept) = linear_fit(&xy);
    let max_relative_residual = points
        .iter()
        .filter(|p| p.epsilon > 0.0)
        .map(|p| ((slope * p.epsilon + intercept) - p.err).abs() / p.err)
        .fold(0.0, f64::max);
    Ok(NoiseSweepResult {
        points,
        runs,
        failures,
        slope,
        intercept,
        max_relative_residual,
    })
}

/// Simulates clean traces once, then reconstructs at every `(epsilon, seed)`.
pub fn noise_sweep(
    s: &Scenario,
    settings: &ExperimentSettings,
    cfg: &SweepConfig,
) -> crate::error::Result<NoiseSweepResult> {
    let clean = simulate(s, settings)?;
    Ok(noise_sweep_from_clean(&clean, s, settings, cfg)?)
}
