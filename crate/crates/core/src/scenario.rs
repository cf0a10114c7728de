//! Experiment description and validation of the standing assumptions on
//! the orbit and the receiver geometry.

use serde::{Deserialize, Serialize};

use crate::error::ConfigError;
use crate::geometry::Vec3;
use crate::inverse::trilaterate::coplanarity;
use crate::orbit::OrbitSpec;
use crate::signal::SourceSignal;

/// Number of points used to check sampled orbit bounds.
pub const BOUND_CHECK_POINTS: usize = 10_001;

const REL_TOL: f64 = 1e-12;

/// An observation point on the boundary sphere together with its outward
/// unit normal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawReceiver")]
pub struct Receiver {
    pub position: Vec3,
    pub normal: Vec3,
}

#[derive(Deserialize)]
struct RawReceiver {
    position: Vec3,
    normal: Option<Vec3>,
}

impl TryFrom<RawReceiver> for Receiver {
    type Error = ConfigError;
    fn try_from(raw: RawReceiver) -> Result<Self, ConfigError> {
        match raw.normal {
            None => Receiver::on_sphere(raw.position),
            Some(normal) => Ok(Receiver {
                position: raw.position,
                normal,
            }),
        }
    }
}

impl Receiver {
    /// Receiver at `position` on a sphere centred at the origin; the normal
    /// is `position / |position|`.
    pub fn on_sphere(position: Vec3) -> Result<Self, ConfigError> {
        let r = position.norm();
        if !(r > 0.0 && r.is_finite()) {
            return Err(ConfigError::Receiver(format!(
                "position {position} has no well-defined outward normal"
            )));
        }
        Ok(Self {
            position,
            normal: position / r,
        })
    }
}

/// Complete experiment description. Field names in configuration files are
/// `c`, `R_gamma`, `R_D`, `receivers`, `orbit`, `signal`, `T0`, `T1`, `T`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    /// Wave speed.
    pub c: f64,
    /// Radius of the boundary sphere carrying the receivers.
    #[serde(rename = "R_gamma")]
    pub r_gamma: f64,
    /// Radius of the ball containing the orbit.
    #[serde(rename = "R_D")]
    pub r_d: f64,
    pub receivers: [Receiver; 4],
    pub orbit: OrbitSpec,
    pub signal: SourceSignal,
    /// Length of the orbit interval `[0, T0]`.
    #[serde(rename = "T0")]
    pub t0: f64,
    /// Extra measurement time after `T0`.
    #[serde(rename = "T1")]
    pub t1: f64,
    /// Measurement horizon, `T0 + T1`.
    #[serde(rename = "T")]
    pub t_total: f64,
}

impl Scenario {
    pub fn receiver_positions(&self) -> [Vec3; 4] {
        self.receivers.map(|r| r.position)
    }

    /// Receivers at `R_gamma / sqrt(3) * (+-1, +-1, +-1)` on the vertices of
    /// a regular tetrahedron, as used by all reference presets.
    pub fn tetrahedral_receivers(r_gamma: f64) -> [Receiver; 4] {
        let s = r_gamma / 3f64.sqrt();
        [
            Vec3::new(s, s, s),
            Vec3::new(-s, -s, s),
            Vec3::new(s, -s, -s),
            Vec3::new(-s, s, -s),
        ]
        .map(|p| Receiver::on_sphere(p).expect("nonzero position"))
    }

    pub fn validate(&self) -> ValidationReport {
        validate_scenario(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Fatal,
    Warning,
}

/// Outcome of one named check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub severity: Severity,
    pub measured: f64,
    pub limit: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    fn push(&mut self, name: impl Into<String>, passed: bool, severity: Severity, measured: f64, limit: f64) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            severity,
            measured,
            limit,
        });
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn has_fatal(&self) -> bool {
        self.fatal_failures().next().is_some()
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn fatal_failures(&self) -> impl Iterator<Item = &Check> {
        self.failures().filter(|c| c.severity == Severity::Fatal)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn summary(&self) -> String {
        self.failures()
            .map(|c| {
                format!(
                    "{} ({:?}): measured {:e}, limit {:e}",
                    c.name, c.severity, c.measured, c.limit
                )
            })
            .collect::<Vec<_>>()
            .join("; ")
    }
}

/// Checks the scenario against its invariants. Failures are reported, not
/// raised; only coplanar receivers and a source speed at or above the wave
/// speed are marked fatal.
pub fn validate_scenario(s: &Scenario) -> ValidationReport {
    use Severity::*;
    let mut rep = ValidationReport::default();
    let o = &s.orbit;

    rep.push("wave_speed_positive", s.c > 0.0 && s.c.is_finite(), Fatal, s.c, 0.0);
    rep.push(
        "source_slower_than_wave",
        o.declared_c0 > 0.0 && o.declared_c0 < s.c,
        Fatal,
        o.declared_c0,
        s.c,
    );

    let horizon = if s.t_total > 0.0 { s.t_total } else { s.t0 };
    let (sup_v, sup_a, _) = o.sampled_bounds(0.0, horizon, BOUND_CHECK_POINTS);
    rep.push(
        "declared_c0_bounds_speed",
        sup_v <= o.declared_c0 * (1.0 + REL_TOL),
        Warning,
        sup_v,
        o.declared_c0,
    );
    rep.push(
        "declared_a0_bounds_acceleration",
        sup_a <= o.declared_a0 * (1.0 + REL_TOL),
        Warning,
        sup_a,
        o.declared_a0,
    );
    let (_, _, sup_p) = o.sampled_bounds(0.0, s.t0, BOUND_CHECK_POINTS);
    rep.push(
        "orbit_inside_domain",
        sup_p <= s.r_d * (1.0 + REL_TOL),
        Warning,
        sup_p,
        s.r_d,
    );
    rep.push("domain_inside_boundary", s.r_d > 0.0 && s.r_d < s.r_gamma, Warning, s.r_d, s.r_gamma);

    rep.push("orbit_interval_positive", s.t0 > 0.0, Warning, s.t0, 0.0);
    let sum = s.t0 + s.t1;
    rep.push(
        "horizon_is_t0_plus_t1",
        (s.t_total - sum).abs() <= REL_TOL * sum.abs().max(f64::MIN_POSITIVE),
        Warning,
        s.t_total,
        sum,
    );
    let travel = (s.r_gamma + s.r_d) / s.c;
    rep.push(
        "t1_covers_travel_time",
        s.t1 >= travel * (1.0 - REL_TOL),
        Warning,
        s.t1,
        travel,
    );

    let (det, threshold) = coplanarity(&s.receiver_positions());
    rep.push("receivers_non_coplanar", det.abs() > threshold, Fatal, det.abs(), threshold);

    for (j, r) in s.receivers.iter().enumerate() {
        let radius = r.position.norm();
        rep.push(
            format!("receiver_{}_on_boundary", j + 1),
            r.position.is_finite() && (radius - s.r_gamma).abs() <= REL_TOL * s.r_gamma,
            Warning,
            radius,
            s.r_gamma,
        );
        let expected = r.position / radius;
        let dev = (r.normal - expected).norm().max((r.normal.norm() - 1.0).abs());
        rep.push(
            format!("receiver_{}_outward_normal", j + 1),
            dev <= REL_TOL,
            Warning,
            dev,
            REL_TOL,
        );
    }

    rep.push("signal_finite", s.signal.is_finite(), Warning, 0.0, 0.0);
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::ExperimentPreset;

    #[test]
    fn example1_passes_every_check() {
        let s = ExperimentPreset::LineExample1.scenario();
        let rep = validate_scenario(&s);
        assert!(rep.all_passed(), "{}", rep.summary());
    }

    #[test]
    fn all_presets_have_no_fatal_failure() {
        for p in ExperimentPreset::ALL {
            let rep = validate_scenario(&p.scenario());
            assert!(rep.all_passed(), "{}: {}", p.name(), rep.summary());
        }
    }

    #[test]
    fn coplanar_receivers_are_fatal() {
        let mut s = ExperimentPreset::LineExample1.scenario();
        let r = s.r_gamma;
        s.receivers = [
            Vec3::new(r, 0.0, 0.0),
            Vec3::new(0.0, r, 0.0),
            Vec3::new(-r, 0.0, 0.0),
            Vec3::new(0.0, -r, 0.0),
        ]
        .map(|p| Receiver::on_sphere(p).unwrap());
        let rep = validate_scenario(&s);
        assert!(rep.has_fatal());
        assert!(!rep.get("receivers_non_coplanar").unwrap().passed);
    }

    #[test]
    fn superluminal_line_is_fatal() {
        let mut s = ExperimentPreset::LineExample1.scenario();
        s.orbit = OrbitSpec::from_params("line", &[2.0 * s.c, 0.0, 0.0], 2.0 * s.c, 1.0).unwrap();
        let rep = validate_scenario(&s);
        assert!(rep.has_fatal());
        assert!(!rep.get("source_slower_than_wave").unwrap().passed);
    }

    #[test]
    fn understated_c0_is_reported_but_not_fatal() {
        let mut s = ExperimentPreset::LineExample1.scenario();
        s.orbit.declared_c0 = 500.0;
        let rep = validate_scenario(&s);
        assert!(!rep.get("declared_c0_bounds_speed").unwrap().passed);
        assert!(!rep.has_fatal());
    }

    #[test]
    fn validation_is_pure() {
        let s = ExperimentPreset::HeartExample2.scenario();
        assert_eq!(validate_scenario(&s), validate_scenario(&s));
    }

    #[test]
    fn receiver_normal_invariance() {
        for p in [Vec3::new(3.0, -4.0, 12.0), Vec3::new(1e4, 2e3, -7e3)] {
            let r = Receiver::on_sphere(p).unwrap();
            assert!((r.normal.dot(r.position) - p.norm()).abs() <= 1e-12 * p.norm());
            assert!((r.normal.norm() - 1.0).abs() <= 1e-12);
        }
        assert!(Receiver::on_sphere(Vec3::ZERO).is_err());
    }

    #[test]
    fn tetrahedral_receivers_lie_on_sphere() {
        for r in Scenario::tetrahedral_receivers(20000.0) {
            assert!((r.position.norm() - 20000.0).abs() <= 1e-12 * 20000.0);
        }
    }
}
