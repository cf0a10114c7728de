//! Temporal source profile `f(t)`: per component a polynomial plus a sum of
//! sinusoids.

use serde::{Deserialize, Serialize};

use crate::geometry::Vec3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct Sinusoid {
    pub amplitude: f64,
    pub omega: f64,
    pub phase: f64,
}

impl From<[f64; 3]> for Sinusoid {
    fn from(a: [f64; 3]) -> Self {
        Sinusoid {
            amplitude: a[0],
            omega: a[1],
            phase: a[2],
        }
    }
}

impl From<Sinusoid> for [f64; 3] {
    fn from(s: Sinusoid) -> Self {
        [s.amplitude, s.omega, s.phase]
    }
}

/// One scalar component: `sum_k poly[k] t^k + sum_j A_j sin(w_j t + phi_j)`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SignalComponent {
    #[serde(default)]
    pub poly: Vec<f64>,
    #[serde(default)]
    pub sines: Vec<Sinusoid>,
}

impl SignalComponent {
    pub fn constant(c: f64) -> Self {
        Self {
            poly: vec![c],
            sines: Vec::new(),
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        // Horner
        let p = self.poly.iter().rev().fold(0.0, |acc, &c| acc * t + c);
        p + self
            .sines
            .iter()
            .map(|s| s.amplitude * (s.omega * t + s.phase).sin())
            .sum::<f64>()
    }

    pub fn derivative(&self, t: f64) -> f64 {
        let p = self
            .poly
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(0.0, |acc, (k, &c)| acc * t + k as f64 * c);
        p + self
            .sines
            .iter()
            .map(|s| s.amplitude * s.omega * (s.omega * t + s.phase).cos())
            .sum::<f64>()
    }

    fn is_finite(&self) -> bool {
        self.poly.iter().all(|c| c.is_finite())
            && self
                .sines
                .iter()
                .all(|s| s.amplitude.is_finite() && s.omega.is_finite() && s.phase.is_finite())
    }
}

/// The vector-valued source profile `f(t)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceSignal {
    pub components: [SignalComponent; 3],
}

impl SourceSignal {
    pub fn new(components: [SignalComponent; 3]) -> Self {
        Self { components }
    }

    pub fn constant(v: Vec3) -> Self {
        Self::new([
            SignalComponent::constant(v.x),
            SignalComponent::constant(v.y),
            SignalComponent::constant(v.z),
        ])
    }

    /// `f(t) = (1, 15 + 10 sin(100 t), -1 - t^2)`, the profile used in all
    /// reference presets.
    pub fn reference() -> Self {
        Self::new([
            SignalComponent::constant(1.0),
            SignalComponent {
                poly: vec![15.0],
                sines: vec![Sinusoid {
                    amplitude: 10.0,
                    omega: 100.0,
                    phase: 0.0,
                }],
            },
            SignalComponent {
                poly: vec![-1.0, 0.0, -1.0],
                sines: Vec::new(),
            },
        ])
    }

    pub fn value(&self, t: f64) -> Vec3 {
        Vec3::new(
            self.components[0].value(t),
            self.components[1].value(t),
            self.components[2].value(t),
        )
    }

    pub fn derivative(&self, t: f64) -> Vec3 {
        Vec3::new(
            self.components[0].derivative(t),
            self.components[1].derivative(t),
            self.components[2].derivative(t),
        )
    }

    pub fn is_finite(&self) -> bool {
        self.components.iter().all(SignalComponent::is_finite)
    }
}
