//! The four reference experiments.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::ConfigError;
use crate::forward::InversionMethod;
use crate::inverse::{ComponentStrategy, InverseSettings};
use crate::orbit::{OrbitShape, OrbitSpec};
use crate::pipeline::{ExperimentSettings, MeasurementPlan};
use crate::scenario::Scenario;
use crate::signal::SourceSignal;

/// Radius of the receiver sphere shared by all presets.
pub const R_GAMMA: f64 = 20000.0;
pub const LIGHT_SPEED: f64 = 3e8;
pub const SOUND_SPEED: f64 = 340.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentPreset {
    LineExample1,
    HeartExample2,
    SpiralExample3,
    SpiralLowspeed,
}

impl ExperimentPreset {
    pub const ALL: [ExperimentPreset; 4] = [
        ExperimentPreset::LineExample1,
        ExperimentPreset::HeartExample2,
        ExperimentPreset::SpiralExample3,
        ExperimentPreset::SpiralLowspeed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentPreset::LineExample1 => "line_example1",
            ExperimentPreset::HeartExample2 => "heart_example2",
            ExperimentPreset::SpiralExample3 => "spiral_example3",
            ExperimentPreset::SpiralLowspeed => "spiral_lowspeed",
        }
    }

    pub fn is_low_speed(self) -> bool {
        self == ExperimentPreset::SpiralLowspeed
    }

    fn orbit(self) -> OrbitSpec {
        use OrbitShape::*;
        match self {
            ExperimentPreset::LineExample1 => OrbitSpec::new(
                Line {
                    origin: Default::default(),
                    velocity: [1000.0, 0.0, 0.0].into(),
                },
                1000.0,
                1.0,
            ),
            // |a'| <= 2 s w, |a''| <= 1.5 s w^2
            ExperimentPreset::HeartExample2 => OrbitSpec::new(
                Heart {
                    scale: 50.0,
                    omega: 100.0,
                },
                1e4,
                2e6,
            ),
            ExperimentPreset::SpiralExample3 => OrbitSpec::new(
                Spiral {
                    radius: 50.0,
                    omega: 100.0,
                    climb: 1000.0,
                },
                5100.0,
                5e5,
            ),
            ExperimentPreset::SpiralLowspeed => OrbitSpec::new(
                Spiral {
                    radius: 5.0,
                    omega: 10.0,
                    climb: 10.0,
                },
                51.0,
                500.0,
            ),
        }
    }

    pub fn scenario(self) -> Scenario {
        let (c, r_d, t0) = if self.is_low_speed() {
            (SOUND_SPEED, 10.0, 2.0 * PI * 1e-1)
        } else {
            (LIGHT_SPEED, 100.0, 2.0 * PI * 1e-2)
        };
        // At c = 340 the tail up to 2 R_gamma / c would be two minutes of
        // silence-free recording; only the travel time across the annulus
        // is needed.
        let t1 = if self.is_low_speed() {
            (R_GAMMA + r_d) / c
        } else {
            2.0 * R_GAMMA / c
        };
        Scenario {
            c,
            r_gamma: R_GAMMA,
            r_d,
            receivers: Scenario::tetrahedral_receivers(R_GAMMA),
            orbit: self.orbit(),
            signal: SourceSignal::reference(),
            t0,
            t1,
            t_total: t0 + t1,
        }
    }

    /// RK4 step.
    pub fn step(self) -> f64 {
        if self.is_low_speed() {
            1e-4
        } else {
            1e-5
        }
    }

    pub fn settings(self) -> ExperimentSettings {
        let measurement = if self.is_low_speed() {
            MeasurementPlan {
                dt: 5e-7,
                windowed: true,
            }
        } else {
            MeasurementPlan {
                dt: 1e-7,
                windowed: false,
            }
        };
        ExperimentSettings {
            method: InversionMethod::Bisection,
            measurement,
            inverse: InverseSettings::new(ComponentStrategy::preset_fixed(), self.step()),
        }
    }

    /// Noise levels of the standard sweep, noise-free run excluded.
    pub fn sweep_epsilons(self) -> Vec<f64> {
        match self {
            ExperimentPreset::LineExample1 => vec![1e-4, 2e-4, 3e-4, 4e-4, 5e-3],
            ExperimentPreset::HeartExample2 | ExperimentPreset::SpiralExample3 => {
                vec![5e-4, 1e-3, 1.5e-3, 2e-3, 2.5e-3]
            }
            ExperimentPreset::SpiralLowspeed => vec![0.03, 0.06, 0.09, 0.12, 0.3],
        }
    }
}

impl fmt::Display for ExperimentPreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentPreset {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, ConfigError> {
        Self::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| ConfigError::UnknownPreset(s.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::Severity;

    #[test]
    fn names_round_trip() {
        for p in ExperimentPreset::ALL {
            assert_eq!(p.name().parse::<ExperimentPreset>().unwrap(), p);
        }
        assert!("helix".parse::<ExperimentPreset>().is_err());
    }

    #[test]
    fn presets_pass_every_check() {
        for p in ExperimentPreset::ALL {
            let rep = p.scenario().validate();
            assert!(rep.all_passed(), "{p}: {}", rep.summary());
            assert!(!rep.checks.iter().any(|c| !c.passed && c.severity == Severity::Fatal));
        }
    }

    #[test]
    fn receivers_lie_on_the_sphere() {
        let s = ExperimentPreset::LineExample1.scenario();
        let k = R_GAMMA / 3f64.sqrt();
        assert_eq!(s.receivers[1].position, [-k, -k, k].into());
        for r in s.receivers {
            assert!((r.position.norm() - R_GAMMA).abs() < 1e-9);
        }
        assert!((s.t1 - 40000.0 / 3e8).abs() < 1e-20);
    }
}
