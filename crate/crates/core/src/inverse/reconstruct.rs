use serde::{Deserialize, Serialize};

use crate::error::InverseError;
use crate::geometry::{TimeGrid, Vec3};
use crate::inverse::access::InterpolatedSeries;
use crate::inverse::arrival::{detect_arrival, ArrivalChannel, ArrivalTime};
use crate::inverse::distance::{solve_distance_ode, ComponentStrategy, DistanceFunction, DistanceProblem};
use crate::inverse::trilaterate::Trilaterator;
use crate::scenario::Scenario;
use crate::series::TimeSeries;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InverseSettings {
    pub strategy: ComponentStrategy,
    /// RK4 step.
    pub step: f64,
    /// Arrival is the first sample with `||H x nu||_inf` above this value.
    pub arrival_threshold: f64,
}

impl InverseSettings {
    pub fn new(strategy: ComponentStrategy, step: f64) -> Self {
        Self {
            strategy,
            step,
            arrival_threshold: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReconstructedOrbit {
    pub grid: TimeGrid,
    pub points: Vec<Vec3>,
}

impl ReconstructedOrbit {
    pub fn iter(&self) -> impl Iterator<Item = (f64, Vec3)> + '_ {
        self.grid.times().zip(self.points.iter().copied())
    }
}

/// Everything produced on the way from traces to orbit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Reconstruction {
    pub arrivals: [ArrivalTime; 4],
    pub distances: [DistanceFunction; 4],
    pub orbit: ReconstructedOrbit,
}

/// The grid `t_k = k h` inside `[0, T0]`.
pub fn reconstruction_grid(t0: f64, h: f64) -> Result<TimeGrid, InverseError> {
    Ok(TimeGrid::within(0.0, t0, h)?)
}

/// Arrival detection followed by the distance ODE for one receiver.
pub fn recover_distance(
    series: &TimeSeries,
    s: &Scenario,
    grid: TimeGrid,
    settings: &InverseSettings,
) -> Result<(ArrivalTime, DistanceFunction), InverseError> {
    let idx = series.receiver_index;
    let annotate = |e: InverseError| e.at_receiver(idx);
    let rx = s
        .receivers
        .get(idx)
        .ok_or_else(|| InverseError::GridMismatch(format!("no receiver with index {idx}")))?;
    let arrival =
        detect_arrival(series, ArrivalChannel::AnyComponent, settings.arrival_threshold).map_err(annotate)?;
    let access = InterpolatedSeries::new(series).with_onset(arrival.t_arrival);
    let problem = DistanceProblem {
        signal: &s.signal,
        normal: rx.normal,
        receiver_index: idx,
        t_arrival: arrival.t_arrival,
        c: s.c,
    };
    let v = solve_distance_ode(&access, problem, grid, &settings.strategy, settings.step)
        .map_err(|abort| annotate(abort.error))?;
    Ok((arrival, v))
}

/// Trilaterates each grid point from four distance functions on a common
/// grid.
pub fn reconstruct_from_distances(
    receivers: &[Vec3; 4],
    distances: &[DistanceFunction; 4],
) -> Result<ReconstructedOrbit, InverseError> {
    let grid = distances[0].grid;
    if let Some(d) = distances.iter().find(|d| d.grid != grid || d.v.len() != grid.n) {
        return Err(InverseError::GridMismatch(format!(
            "distance function of receiver {} is not on the common grid",
            d.receiver_index + 1
        )));
    }
    let tri = Trilaterator::new(*receivers)?;
    let points = (0..grid.n)
        .map(|k| tri.locate([0, 1, 2, 3].map(|j| distances[j].v[k])))
        .collect();
    Ok(ReconstructedOrbit { grid, points })
}

/// Arrival detection, distance ODE and trilateration for all four
/// receivers. `series[j]` must belong to receiver `j`.
pub fn reconstruct(
    series: &[TimeSeries; 4],
    s: &Scenario,
    grid: TimeGrid,
    settings: &InverseSettings,
) -> Result<Reconstruction, InverseError> {
    if let Some((j, _)) = series.iter().enumerate().find(|(j, ts)| ts.receiver_index != *j) {
        return Err(InverseError::GridMismatch(format!(
            "series in slot {j} belongs to receiver {}",
            series[j].receiver_index
        )));
    }
    let mut parts = Vec::with_capacity(4);
    for ts in series {
        parts.push(recover_distance(ts, s, grid, settings)?);
    }
    let arrivals = [0, 1, 2, 3].map(|j| parts[j].0);
    let distances: [DistanceFunction; 4] = parts
        .into_iter()
        .map(|p| p.1)
        .collect::<Vec<_>>()
        .try_into()
        .expect("four receivers");
    let orbit = reconstruct_from_distances(&s.receiver_positions(), &distances)?;
    Ok(Reconstruction {
        arrivals,
        distances,
        orbit,
    })
}

/// [`reconstruct`] keeping only the orbit.
pub fn reconstruct_orbit(
    series: &[TimeSeries; 4],
    s: &Scenario,
    grid: TimeGrid,
    settings: &InverseSettings,
) -> Result<ReconstructedOrbit, InverseError> {
    reconstruct(series, s, grid, settings).map(|r| r.orbit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inverse::distance::DistanceDiagnostics;
    use crate::presets::ExperimentPreset;

    #[test]
    fn exact_distances_give_exact_orbit() {
        for preset in ExperimentPreset::ALL {
            let s = preset.scenario();
            let grid = TimeGrid::within(0.0, s.t0, s.t0 / 500.0).unwrap();
            let rx = s.receiver_positions();
            let distances = [0, 1, 2, 3].map(|j| DistanceFunction {
                grid,
                v: grid.times().map(|t| rx[j].distance(s.orbit.position(t))).collect(),
                receiver_index: j,
                diagnostics: DistanceDiagnostics::default(),
            });
            let orbit = reconstruct_from_distances(&rx, &distances).unwrap();
            let scale = s.r_d;
            for (t, p) in orbit.iter() {
                let err = (p - s.orbit.position(t)).norm();
                assert!(err <= 1e-9 * scale.max(1.0), "{}: t={t} err={err}", preset.name());
            }
        }
    }

    #[test]
    fn preset_receivers_locate_origin() {
        let rx = Scenario::tetrahedral_receivers(20000.0).map(|r| r.position);
        let d = rx.map(|x| x.norm());
        for v in d {
            assert!((v - 20000.0).abs() < 1e-9);
        }
        let p = crate::inverse::trilaterate::trilaterate(&rx, d).unwrap();
        assert!(p.norm() < 1e-9);
    }

    #[test]
    fn mismatched_grids_are_rejected() {
        let g1 = TimeGrid::new(0.0, 0.1, 5).unwrap();
        let g2 = TimeGrid::new(0.0, 0.1, 6).unwrap();
        let mk = |grid: TimeGrid, j| DistanceFunction {
            grid,
            v: vec![1.0; grid.n],
            receiver_index: j,
            diagnostics: DistanceDiagnostics::default(),
        };
        let rx = Scenario::tetrahedral_receivers(1.0).map(|r| r.position);
        let err = reconstruct_from_distances(&rx, &[mk(g1, 0), mk(g1, 1), mk(g2, 2), mk(g1, 3)]).unwrap_err();
        assert!(matches!(err, InverseError::GridMismatch(_)));
    }
}
