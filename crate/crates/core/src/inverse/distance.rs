//! The distance function `v(t) = |x - a(t)|` of one receiver as the solution
//! of
//!
//! ```text
//! v'(t) = c (f(t) x nu)_i / (4 pi v(t) H_i(x, t + v(t)/c)) - c,   v(0) = c T(x)
//! ```
//!
//! where `H_i` is one component of the measured tangential trace.

use std::f64::consts::PI;

use log::{debug, warn};
use serde::{Deserialize, Serialize};

use crate::error::InverseError;
use crate::geometry::{Axis, TimeGrid, Vec3};
use crate::inverse::access::FieldAccess;
use crate::ode::{integrate, Trajectory};
use crate::signal::SourceSignal;

/// Absolute floor below which a field component is never used as a divisor.
pub const DENOMINATOR_GUARD: f64 = 1e-300;

/// Default relative fallback threshold.
pub const DEFAULT_FALLBACK_THRESHOLD: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentMode {
    /// One component per receiver.
    Fixed([Axis; 4]),
    /// The component with the largest `|(f(t) x nu)_j|`, ties to the lowest
    /// index.
    MaxSignal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComponentStrategy {
    pub mode: ComponentMode,
    /// A component is skipped when `|H_i|` at the query point falls below
    /// `fallback_threshold * scale`, with `scale = max_t ||H x nu||_inf`.
    pub fallback_threshold: f64,
}

impl ComponentStrategy {
    /// `H1` at `x1`, `H2` at `x2`, `H3` at `x3` and `x4`.
    pub fn preset_fixed() -> Self {
        Self::fixed([Axis::X, Axis::Y, Axis::Z, Axis::Z])
    }

    pub fn fixed(axes: [Axis; 4]) -> Self {
        Self {
            mode: ComponentMode::Fixed(axes),
            fallback_threshold: DEFAULT_FALLBACK_THRESHOLD,
        }
    }

    pub fn max_signal() -> Self {
        Self {
            mode: ComponentMode::MaxSignal,
            fallback_threshold: DEFAULT_FALLBACK_THRESHOLD,
        }
    }

    pub fn with_fallback_threshold(mut self, threshold: f64) -> Self {
        self.fallback_threshold = threshold;
        self
    }
}

impl Default for ComponentStrategy {
    fn default() -> Self {
        Self::max_signal()
    }
}

/// Components ordered by `|(f x nu)_j|` descending, ties to the lowest index.
fn by_signal_strength(fxn: Vec3) -> [Axis; 3] {
    let mut axes = Axis::ALL;
    axes.sort_by(|a, b| fxn.get(*b).abs().total_cmp(&fxn.get(*a).abs()));
    axes
}

/// Outcome of one right-hand side evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhsEval {
    pub value: f64,
    /// The component that was used.
    pub axis: Axis,
    /// Whether the strategy's first choice was rejected.
    pub fell_back: bool,
}

/// Right-hand side of the distance ODE for the receiver with outward normal
/// `nu` and strategy slot `receiver_index`.
#[allow(clippy::too_many_arguments)]
pub fn distance_ode_rhs(
    v: f64,
    t: f64,
    access: &impl FieldAccess,
    f: &SourceSignal,
    nu: Vec3,
    strat: &ComponentStrategy,
    c: f64,
    receiver_index: usize,
) -> Result<RhsEval, InverseError> {
    if !(v > 0.0) {
        return Err(InverseError::BlowUp { t, v });
    }
    let query = t + v / c;
    let h = access.at(query).map_err(|e| e.into_inverse(t, query))?;
    let fxn = f.value(t).cross(nu);
    let floor = (strat.fallback_threshold * access.scale()).max(DENOMINATOR_GUARD);

    let order = by_signal_strength(fxn);
    let first = match strat.mode {
        ComponentMode::Fixed(axes) => axes[receiver_index.min(3)],
        ComponentMode::MaxSignal => order[0],
    };
    let candidates = std::iter::once(first).chain(order.into_iter().filter(|a| *a != first));
    for (rank, axis) in candidates.enumerate() {
        let hi = h.get(axis);
        if hi.abs() >= floor && hi.is_finite() {
            let value = c * fxn.get(axis) / (4.0 * PI * v * hi) - c;
            return Ok(RhsEval {
                value,
                axis,
                fell_back: rank > 0,
            });
        }
    }
    Err(InverseError::DegenerateData { t })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct DistanceDiagnostics {
    /// RHS evaluations that had to skip the first-choice component.
    pub fallback_count: usize,
    pub first_fallback_t: Option<f64>,
    /// `max_k |v[k+1] - v[k]| / (dt c)`; must stay below one.
    pub max_speed_ratio: f64,
    pub speed_bound_violations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistanceFunction {
    pub grid: TimeGrid,
    pub v: Vec<f64>,
    pub receiver_index: usize,
    pub diagnostics: DistanceDiagnostics,
}

impl DistanceFunction {
    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.grid.times().zip(self.v.iter().copied())
    }
}

/// Integration stopped early. `partial` holds the nodes completed before
/// the failure.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{error}")]
pub struct OdeAbort {
    pub error: InverseError,
    pub partial: Trajectory,
}

/// Inputs for [`solve_distance_ode`] that describe the receiver.
#[derive(Debug, Clone, Copy)]
pub struct DistanceProblem<'a> {
    pub signal: &'a SourceSignal,
    pub normal: Vec3,
    pub receiver_index: usize,
    pub t_arrival: f64,
    pub c: f64,
}

/// Classical RK4 with fixed step `h` from `v(0) = c t_arrival`, sampled onto
/// `grid` by cubic Hermite interpolation of the nodes.
pub fn solve_distance_ode(
    access: &impl FieldAccess,
    p: DistanceProblem<'_>,
    grid: TimeGrid,
    strat: &ComponentStrategy,
    h: f64,
) -> Result<DistanceFunction, OdeAbort> {
    let abort = |error| OdeAbort {
        error,
        partial: Trajectory {
            t0: 0.0,
            h,
            y: vec![],
            dy: vec![],
        },
    };
    if !(h > 0.0) || grid.t_start < 0.0 {
        return Err(abort(InverseError::GridMismatch(format!(
            "need h > 0 and a grid inside [0, T0], got h = {h}, t_start = {}",
            grid.t_start
        ))));
    }
    let v0 = p.c * p.t_arrival;
    if !(v0 > 0.0) {
        return Err(abort(InverseError::BlowUp { t: 0.0, v: v0 }));
    }

    let steps = ((grid.t_end() / h) - 1e-9).ceil().max(0.0) as usize;
    let mut diag = DistanceDiagnostics::default();
    let rhs = |t: f64, v: f64| {
        let e = distance_ode_rhs(v, t, access, p.signal, p.normal, strat, p.c, p.receiver_index)?;
        if e.fell_back {
            if diag.fallback_count == 0 {
                diag.first_fallback_t = Some(t);
                debug!(
                    "FALLBACK receiver={} t={t:e} using H{}",
                    p.receiver_index + 1,
                    e.axis
                );
            }
            diag.fallback_count += 1;
        }
        Ok(e.value)
    };
    let traj = integrate(rhs, 0.0, v0, h, steps).map_err(|(error, partial)| {
        warn!(
            "ODE_ABORT receiver={} after {} nodes: {error}",
            p.receiver_index + 1,
            partial.y.len()
        );
        OdeAbort { error, partial }
    })?;

    if let Some(k) = traj.y.iter().position(|v| !(*v > 0.0)) {
        let error = InverseError::BlowUp {
            t: traj.node_time(k),
            v: traj.y[k],
        };
        return Err(OdeAbort {
            error,
            partial: traj,
        });
    }

    let v: Vec<f64> = grid.times().map(|t| traj.at(t)).collect();
    for w in v.windows(2) {
        let ratio = (w[1] - w[0]).abs() / (grid.dt * p.c);
        diag.max_speed_ratio = diag.max_speed_ratio.max(ratio);
        if !(ratio < 1.0) {
            diag.speed_bound_violations += 1;
        }
    }
    if diag.fallback_count > 0 {
        debug!(
            "FALLBACK_SUMMARY receiver={} count={}",
            p.receiver_index + 1,
            diag.fallback_count
        );
    }
    if diag.speed_bound_violations > 0 {
        warn!(
            "SPEED_BOUND receiver={} violations={} max |dv/dt|/c = {}",
            p.receiver_index + 1,
            diag.speed_bound_violations,
            diag.max_speed_ratio
        );
    }
    Ok(DistanceFunction {
        grid,
        v,
        receiver_index: p.receiver_index,
        diagnostics: diag,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forward::GInversionConfig;
    use crate::inverse::access::ExactField;
    use crate::orbit::{OrbitShape, OrbitSpec, SineTerm};
    use crate::scenario::{Receiver, Scenario};

    fn scenario(orbit: OrbitSpec, c: f64, x: Vec3, t0: f64) -> Scenario {
        let r_gamma = x.norm();
        let mut receivers = Scenario::tetrahedral_receivers(r_gamma);
        receivers[0] = Receiver::on_sphere(x).unwrap();
        let t1 = 2.0 * r_gamma / c;
        Scenario {
            c,
            r_gamma,
            r_d: 0.5 * r_gamma,
            receivers,
            orbit,
            signal: SourceSignal::reference(),
            t0,
            t1,
            t_total: t0 + t1,
        }
    }

    fn exact(s: &Scenario) -> ExactField<'_> {
        ExactField::new(s, 0, GInversionConfig::exact(s.t_total))
    }

    fn problem(s: &Scenario) -> DistanceProblem<'_> {
        let x = s.receivers[0].position;
        DistanceProblem {
            signal: &s.signal,
            normal: s.receivers[0].normal,
            receiver_index: 0,
            t_arrival: x.distance(s.orbit.position(0.0)) / s.c,
            c: s.c,
        }
    }

    #[test]
    fn stationary_source_has_zero_rhs() {
        let orbit = OrbitSpec::from_params("stationary_point", &[0.5, -0.2, 0.1], 1e-9, 1e-9).unwrap();
        let x = Vec3::new(0.0, 0.0, 10.0);
        let s = scenario(orbit, 3.0, x, 1.0);
        let acc = exact(&s);
        let r = x.distance(Vec3::new(0.5, -0.2, 0.1));
        for strat in [ComponentStrategy::max_signal(), ComponentStrategy::preset_fixed()] {
            for k in 0..20 {
                let t = 0.05 * k as f64;
                let e = distance_ode_rhs(r, t, &acc, &s.signal, s.receivers[0].normal, &strat, s.c, 0)
                    .unwrap();
                assert!(e.value.abs() <= 1e-10 * s.c, "t={t}: {}", e.value);
            }
        }
    }

    #[test]
    fn radial_line_rhs_is_minus_speed() {
        let v0 = 2.0;
        let orbit = OrbitSpec::from_params("line", &[v0, 0.0, 0.0], v0, 1e-9).unwrap();
        // far enough that the source stays clear of x up to T
        let xr = 40.0;
        let s = scenario(orbit, 5.0, Vec3::new(xr, 0.0, 0.0), 1.0);
        let acc = exact(&s);
        let strat = ComponentStrategy::max_signal();
        for k in 0..=20 {
            let t = 0.05 * k as f64;
            let v = xr - v0 * t;
            let e = distance_ode_rhs(v, t, &acc, &s.signal, s.receivers[0].normal, &strat, s.c, 0)
                .unwrap();
            assert!((e.value + v0).abs() <= 1e-10 * s.c, "t={t}: {}", e.value);
        }
    }

    #[test]
    fn fallback_when_fixed_component_vanishes() {
        // nu = e_x, so (f x nu)_1 = 0 and H1 vanishes identically
        let orbit = OrbitSpec::from_params("stationary_point", &[0.0, 0.0, 0.0], 1e-9, 1e-9).unwrap();
        let x = Vec3::new(4.0, 0.0, 0.0);
        let s = scenario(orbit, 2.0, x, 1.0);
        let acc = exact(&s);
        let strat = ComponentStrategy::fixed([Axis::X; 4]);
        let e = distance_ode_rhs(4.0, 0.3, &acc, &s.signal, Vec3::new(1.0, 0.0, 0.0), &strat, s.c, 0)
            .unwrap();
        assert!(e.fell_back);
        // |(f x nu)| = (0, f3, -f2) with |f2| > |f3| near t = 0.3
        assert_eq!(e.axis, Axis::Z);
        assert!(e.value.abs() < 1e-10);
    }

    #[test]
    fn strength_order_breaks_ties_low() {
        assert_eq!(by_signal_strength(Vec3::new(1.0, -3.0, 3.0)), [Axis::Y, Axis::Z, Axis::X]);
        assert_eq!(by_signal_strength(Vec3::ZERO), Axis::ALL);
    }

    #[test]
    fn query_beyond_record_is_a_horizon_error() {
        let orbit = OrbitSpec::from_params("stationary_point", &[0.0, 0.0, 0.0], 1e-9, 1e-9).unwrap();
        let s = scenario(orbit, 2.0, Vec3::new(4.0, 0.0, 0.0), 1.0);
        let acc = exact(&s);
        let err = distance_ode_rhs(
            4.0,
            s.t_total,
            &acc,
            &s.signal,
            s.receivers[0].normal,
            &ComponentStrategy::max_signal(),
            s.c,
            0,
        )
        .unwrap_err();
        assert!(matches!(err, InverseError::Horizon { .. }));
    }

    #[test]
    fn stationary_solution_is_constant() {
        let orbit = OrbitSpec::from_params("stationary_point", &[1.0, 2.0, -1.0], 1e-9, 1e-9).unwrap();
        let x = Vec3::new(0.0, 30.0, 0.0);
        let s = scenario(orbit, 50.0, x, 1.0);
        let acc = exact(&s);
        let grid = TimeGrid::within(0.0, 1.0, 0.01).unwrap();
        let d = solve_distance_ode(&acc, problem(&s), grid, &ComponentStrategy::max_signal(), 0.01)
            .unwrap();
        let r = x.distance(Vec3::new(1.0, 2.0, -1.0));
        for v in &d.v {
            assert!((v - r).abs() <= 1e-12 * r);
        }
        assert!(d.diagnostics.max_speed_ratio < 1e-12);
    }

    fn oscillating(amplitude: f64, omega: f64) -> OrbitSpec {
        OrbitSpec::new(
            OrbitShape::AffineSinusoid {
                offset: Vec3::ZERO,
                velocity: Vec3::ZERO,
                terms: vec![SineTerm {
                    axis: Axis::X,
                    amplitude,
                    omega,
                    phase: 0.0,
                }],
            },
            amplitude * omega,
            amplitude * omega * omega,
        )
    }

    #[test]
    fn rk4_order_on_radial_oscillation() {
        let (a, w, xr) = (10.0, 5.0, 100.0);
        let s = scenario(oscillating(a, w), 340.0, Vec3::new(xr, 0.0, 0.0), 1.0);
        let acc = exact(&s);
        let err = |h: f64| {
            let grid = TimeGrid::within(0.0, 1.0, h).unwrap();
            let d = solve_distance_ode(&acc, problem(&s), grid, &ComponentStrategy::max_signal(), h)
                .unwrap();
            d.iter()
                .map(|(t, v)| (v - (xr - a * (w * t).sin())).abs())
                .fold(0.0, f64::max)
        };
        let order = (err(1e-2) / err(5e-3)).log2();
        assert!(order >= 3.5, "order {order}");
    }

    #[test]
    fn negative_distance_aborts() {
        let orbit = OrbitSpec::from_params("stationary_point", &[0.0, 0.0, 0.0], 1e-9, 1e-9).unwrap();
        let s = scenario(orbit, 2.0, Vec3::new(4.0, 0.0, 0.0), 1.0);
        let acc = exact(&s);
        let mut p = problem(&s);
        p.t_arrival = -1.0;
        let grid = TimeGrid::within(0.0, 1.0, 0.1).unwrap();
        let err = solve_distance_ode(&acc, p, grid, &ComponentStrategy::max_signal(), 0.1).unwrap_err();
        assert!(matches!(err.error, InverseError::BlowUp { .. }));
    }
}
