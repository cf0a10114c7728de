//! Parametric source orbits with closed-form first and second derivatives.

use serde::{Deserialize, Serialize};

use crate::error::ConfigError;
use crate::geometry::{Axis, Vec3};

/// A sinusoidal term `amplitude * sin(omega * t + phase)` acting on one
/// coordinate of an [`OrbitShape::AffineSinusoid`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SineTerm {
    pub axis: Axis,
    pub amplitude: f64,
    pub omega: f64,
    pub phase: f64,
}

/// The closed-form orbit families.
#[derive(Debug, Clone, PartialEq)]
pub enum OrbitShape {
    /// `a(t) = origin + velocity * t`
    Line { origin: Vec3, velocity: Vec3 },
    /// `a(t) = scale (1 - sin wt) (cos wt, sin wt, 0)`
    Heart { scale: f64, omega: f64 },
    /// `a(t) = (radius cos wt, radius sin wt, climb * t)`
    Spiral { radius: f64, omega: f64, climb: f64 },
    StationaryPoint { position: Vec3 },
    /// `a(t) = offset + velocity * t + sum_k A_k sin(w_k t + phi_k)` per axis.
    AffineSinusoid {
        offset: Vec3,
        velocity: Vec3,
        terms: Vec<SineTerm>,
    },
}

/// Position, velocity and acceleration at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitState {
    pub position: Vec3,
    pub velocity: Vec3,
    pub acceleration: Vec3,
}

/// An orbit together with its declared speed and acceleration bounds.
///
/// Serialized as `{ kind, params, declared_c0, declared_a0 }`; the flat
/// `params` layout per kind is
///
/// | kind              | params                                                      |
/// |-------------------|-------------------------------------------------------------|
/// | `line`            | `[v1, v2, v3]` or `[p1, p2, p3, v1, v2, v3]`                |
/// | `heart`           | `[scale, omega]`                                            |
/// | `spiral`          | `[radius, omega, climb]`                                    |
/// | `stationary_point`| `[p1, p2, p3]`                                              |
/// | `affine_sinusoid` | `[p1, p2, p3, v1, v2, v3]` then `(axis, A, omega, phase)`*  |
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawOrbitSpec", into = "RawOrbitSpec")]
pub struct OrbitSpec {
    pub shape: OrbitShape,
    pub declared_c0: f64,
    pub declared_a0: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RawOrbitSpec {
    kind: String,
    params: Vec<f64>,
    declared_c0: f64,
    declared_a0: f64,
}

impl TryFrom<RawOrbitSpec> for OrbitSpec {
    type Error = ConfigError;
    fn try_from(raw: RawOrbitSpec) -> Result<Self, Self::Error> {
        OrbitSpec::from_params(&raw.kind, &raw.params, raw.declared_c0, raw.declared_a0)
    }
}

impl From<OrbitSpec> for RawOrbitSpec {
    fn from(o: OrbitSpec) -> Self {
        RawOrbitSpec {
            kind: o.kind_name().to_string(),
            params: o.params(),
            declared_c0: o.declared_c0,
            declared_a0: o.declared_a0,
        }
    }
}

impl OrbitSpec {
    pub fn new(shape: OrbitShape, declared_c0: f64, declared_a0: f64) -> Self {
        Self {
            shape,
            declared_c0,
            declared_a0,
        }
    }

    /// Builds an orbit from a kind name and a flat coefficient list.
    pub fn from_params(
        kind: &str,
        params: &[f64],
        declared_c0: f64,
        declared_a0: f64,
    ) -> Result<Self, ConfigError> {
        let want = |n: usize| -> Result<(), ConfigError> {
            if params.len() == n {
                Ok(())
            } else {
                Err(ConfigError::OrbitParams {
                    kind: kind.to_string(),
                    detail: format!("expected {n} params, got {}", params.len()),
                })
            }
        };
        let v3 = |i: usize| Vec3::new(params[i], params[i + 1], params[i + 2]);
        let shape = match kind {
            "line" => match params.len() {
                3 => OrbitShape::Line {
                    origin: Vec3::ZERO,
                    velocity: v3(0),
                },
                _ => {
                    want(6)?;
                    OrbitShape::Line {
                        origin: v3(0),
                        velocity: v3(3),
                    }
                }
            },
            "heart" => {
                want(2)?;
                OrbitShape::Heart {
                    scale: params[0],
                    omega: params[1],
                }
            }
            "spiral" => {
                want(3)?;
                OrbitShape::Spiral {
                    radius: params[0],
                    omega: params[1],
                    climb: params[2],
                }
            }
            "stationary_point" => {
                want(3)?;
                OrbitShape::StationaryPoint { position: v3(0) }
            }
            "affine_sinusoid" => {
                if params.len() < 6 || !(params.len() - 6).is_multiple_of(4) {
                    return Err(ConfigError::OrbitParams {
                        kind: kind.to_string(),
                        detail: format!(
                            "expected 6 + 4k params, got {}",
                            params.len()
                        ),
                    });
                }
                let terms = params[6..]
                    .chunks_exact(4)
                    .map(|c| {
                        let axis = Axis::from_number(c[0] as u8)
                            .filter(|_| c[0].fract() == 0.0)
                            .ok_or_else(|| ConfigError::OrbitParams {
                                kind: kind.to_string(),
                                detail: format!("term axis must be 1, 2 or 3, got {}", c[0]),
                            })?;
                        Ok(SineTerm {
                            axis,
                            amplitude: c[1],
                            omega: c[2],
                            phase: c[3],
                        })
                    })
                    .collect::<Result<Vec<_>, ConfigError>>()?;
                OrbitShape::AffineSinusoid {
                    offset: v3(0),
                    velocity: v3(3),
                    terms,
                }
            }
            other => return Err(ConfigError::UnknownOrbitKind(other.to_string())),
        };
        if params.iter().any(|p| !p.is_finite()) {
            return Err(ConfigError::OrbitParams {
                kind: kind.to_string(),
                detail: "non-finite parameter".into(),
            });
        }
        Ok(Self::new(shape, declared_c0, declared_a0))
    }

    pub fn kind_name(&self) -> &'static str {
        match self.shape {
            OrbitShape::Line { .. } => "line",
            OrbitShape::Heart { .. } => "heart",
            OrbitShape::Spiral { .. } => "spiral",
            OrbitShape::StationaryPoint { .. } => "stationary_point",
            OrbitShape::AffineSinusoid { .. } => "affine_sinusoid",
        }
    }

    pub fn params(&self) -> Vec<f64> {
        match &self.shape {
            OrbitShape::Line { origin, velocity } => {
                let mut p = origin.to_array().to_vec();
                p.extend(velocity.to_array());
                p
            }
            OrbitShape::Heart { scale, omega } => vec![*scale, *omega],
            OrbitShape::Spiral {
                radius,
                omega,
                climb,
            } => vec![*radius, *omega, *climb],
            OrbitShape::StationaryPoint { position } => position.to_array().to_vec(),
            OrbitShape::AffineSinusoid {
                offset,
                velocity,
                terms,
            } => {
                let mut p = offset.to_array().to_vec();
                p.extend(velocity.to_array());
                for t in terms {
                    p.extend([t.axis.number() as f64, t.amplitude, t.omega, t.phase]);
                }
                p
            }
        }
    }

    pub fn position(&self, t: f64) -> Vec3 {
        match &self.shape {
            OrbitShape::Line { origin, velocity } => *origin + *velocity * t,
            OrbitShape::Heart { scale, omega } => {
                let (s, c) = (omega * t).sin_cos();
                let r = scale * (1.0 - s);
                Vec3::new(r * c, r * s, 0.0)
            }
            OrbitShape::Spiral {
                radius,
                omega,
                climb,
            } => {
                let (s, c) = (omega * t).sin_cos();
                Vec3::new(radius * c, radius * s, climb * t)
            }
            OrbitShape::StationaryPoint { position } => *position,
            OrbitShape::AffineSinusoid {
                offset,
                velocity,
                terms,
            } => {
                let mut p = [0.0; 3];
                for term in terms {
                    p[term.axis.index()] += term.amplitude * (term.omega * t + term.phase).sin();
                }
                *offset + *velocity * t + Vec3::from(p)
            }
        }
    }

    /// Exact position, velocity and acceleration at time `t`.
    pub fn eval(&self, t: f64) -> OrbitState {
        let position = self.position(t);
        let (velocity, acceleration) = match &self.shape {
            OrbitShape::Line { velocity, .. } => (*velocity, Vec3::ZERO),
            OrbitShape::Heart { scale, omega } => {
                let th = omega * t;
                let (s, c) = th.sin_cos();
                let (s2, c2) = (2.0 * th).sin_cos();
                let k1 = scale * omega;
                let k2 = scale * omega * omega;
                (
                    Vec3::new(k1 * (-s - c2), k1 * (c - s2), 0.0),
                    Vec3::new(k2 * (-c + 2.0 * s2), k2 * (-s - 2.0 * c2), 0.0),
                )
            }
            OrbitShape::Spiral {
                radius,
                omega,
                climb,
            } => {
                let (s, c) = (omega * t).sin_cos();
                let k1 = radius * omega;
                let k2 = radius * omega * omega;
                (
                    Vec3::new(-k1 * s, k1 * c, *climb),
                    Vec3::new(-k2 * c, -k2 * s, 0.0),
                )
            }
            OrbitShape::StationaryPoint { .. } => (Vec3::ZERO, Vec3::ZERO),
            OrbitShape::AffineSinusoid {
                velocity, terms, ..
            } => {
                let mut v = velocity.to_array();
                let mut a = [0.0; 3];
                for term in terms {
                    let (s, c) = (term.omega * t + term.phase).sin_cos();
                    v[term.axis.index()] += term.amplitude * term.omega * c;
                    a[term.axis.index()] -= term.amplitude * term.omega * term.omega * s;
                }
                (Vec3::from(v), Vec3::from(a))
            }
        };
        OrbitState {
            position,
            velocity,
            acceleration,
        }
    }

    /// Sampled `(sup |a'|, sup |a''|, sup |a|)` over `n` uniform points of
    /// `[t0, t1]`.
    pub fn sampled_bounds(&self, t0: f64, t1: f64, n: usize) -> (f64, f64, f64) {
        let n = n.max(2);
        let dt = (t1 - t0) / (n - 1) as f64;
        (0..n)
            .map(|k| self.eval(t0 + k as f64 * dt))
            .fold((0.0f64, 0.0f64, 0.0f64), |(v, a, p), s| {
                (
                    v.max(s.velocity.norm()),
                    a.max(s.acceleration.norm()),
                    p.max(s.position.norm()),
                )
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spiral_example3() -> OrbitSpec {
        OrbitSpec::from_params("spiral", &[50.0, 100.0, 1000.0], 5100.0, 5.0e5).unwrap()
    }

    fn all_presets() -> Vec<OrbitSpec> {
        vec![
            OrbitSpec::from_params("line", &[1000.0, 0.0, 0.0], 1000.0, 1.0).unwrap(),
            OrbitSpec::from_params("heart", &[50.0, 100.0], 1e4, 2e6).unwrap(),
            spiral_example3(),
            OrbitSpec::from_params("stationary_point", &[1.0, 2.0, 3.0], 1.0, 1.0).unwrap(),
            OrbitSpec::from_params(
                "affine_sinusoid",
                &[1.0, -2.0, 0.5, 3.0, 0.0, -1.0, 1.0, 2.0, 7.0, 0.3, 3.0, -1.5, 11.0, 1.0],
                100.0,
                1000.0,
            )
            .unwrap(),
        ]
    }

    #[test]
    fn line_example_values() {
        let o = OrbitSpec::from_params("line", &[1000.0, 0.0, 0.0], 1000.0, 1.0).unwrap();
        let s = o.eval(0.01);
        assert_eq!(s.position, Vec3::new(10.0, 0.0, 0.0));
        assert_eq!(s.velocity, Vec3::new(1000.0, 0.0, 0.0));
        assert_eq!(s.acceleration, Vec3::ZERO);
    }

    #[test]
    fn stationary_point_is_constant() {
        let p = Vec3::new(4.0, -1.0, 2.5);
        let o = OrbitSpec::new(OrbitShape::StationaryPoint { position: p }, 1.0, 1.0);
        for t in [0.0, 0.3, 17.0] {
            let s = o.eval(t);
            assert_eq!(s.position, p);
            assert_eq!(s.velocity, Vec3::ZERO);
            assert_eq!(s.acceleration, Vec3::ZERO);
        }
    }

    #[test]
    fn spiral_at_zero_matches_hand_derivative() {
        let s = spiral_example3().eval(0.0);
        assert_eq!(s.position, Vec3::new(50.0, 0.0, 0.0));
        assert_eq!(s.velocity, Vec3::new(0.0, 5000.0, 1000.0));
        assert_eq!(s.acceleration, Vec3::new(-500000.0, 0.0, 0.0));

        // central differences at step 1e-7
        let o = spiral_example3();
        let h = 1e-7;
        let fd_v = (o.position(h) - o.position(-h)) / (2.0 * h);
        assert!((fd_v - s.velocity).norm() < 1e-3);
        let fd_a = (o.eval(h).velocity - o.eval(-h).velocity) / (2.0 * h);
        assert!((fd_a - s.acceleration).norm() < 1e-1);
    }

    #[test]
    fn derivatives_converge_at_second_order() {
        // scaled units: t = tau / omega_max so the step is dimensionless
        for o in all_presets() {
            let scale = 0.01;
            let t = 0.37 * scale;
            let exact = o.eval(t);
            let err = |h: f64| {
                let h = h * scale;
                let v = (o.position(t + h) - o.position(t - h)) / (2.0 * h);
                let a = (o.eval(t + h).velocity - o.eval(t - h).velocity) / (2.0 * h);
                ((v - exact.velocity).norm(), (a - exact.acceleration).norm())
            };
            let (ev1, ea1) = err(1e-2);
            let (ev2, ea2) = err(5e-3);
            for (e1, e2) in [(ev1, ev2), (ea1, ea2)] {
                if e1 > 1e-9 * (1.0 + exact.velocity.norm() + exact.acceleration.norm()) {
                    let order = (e1 / e2).log2();
                    assert!(order > 1.9, "{}: order {order}", o.kind_name());
                }
            }
        }
    }

    #[test]
    fn heart_closed_form_matches_finite_differences() {
        let o = OrbitSpec::from_params("heart", &[50.0, 100.0], 1e4, 2e6).unwrap();
        for k in 0..50 {
            let t = k as f64 * 1.3e-3;
            let s = o.eval(t);
            let h = 1e-6;
            let fd_v = (o.position(t + h) - o.position(t - h)) / (2.0 * h);
            let fd_a = (o.position(t + h) - 2.0 * o.position(t) + o.position(t - h)) / (h * h);
            assert!((fd_v - s.velocity).norm() < 1e-4 * s.velocity.norm().max(1.0));
            assert!((fd_a - s.acceleration).norm() < 1e-3 * s.acceleration.norm().max(1.0));
        }
    }

    #[test]
    fn unknown_kind_is_a_config_error() {
        let err = OrbitSpec::from_params("lissajous", &[1.0], 1.0, 1.0).unwrap_err();
        assert!(matches!(err, ConfigError::UnknownOrbitKind(_)));
        let err = OrbitSpec::from_params("heart", &[1.0], 1.0, 1.0).unwrap_err();
        assert!(matches!(err, ConfigError::OrbitParams { .. }));
        let err =
            OrbitSpec::from_params("affine_sinusoid", &[0.0; 10], 1.0, 1.0).unwrap_err();
        assert!(matches!(err, ConfigError::OrbitParams { .. }));
    }

    #[test]
    fn params_round_trip() {
        for o in all_presets() {
            let back =
                OrbitSpec::from_params(o.kind_name(), &o.params(), o.declared_c0, o.declared_a0)
                    .unwrap();
            assert_eq!(back, o);
        }
    }

    #[test]
    fn heart_speed_bound() {
        let o = OrbitSpec::from_params("heart", &[50.0, 100.0], 1e4, 2e6).unwrap();
        let (v, a, p) = o.sampled_bounds(0.0, 2.0 * std::f64::consts::PI * 1e-2, 10_001);
        assert!(v <= 1e4 * (1.0 + 1e-12));
        assert!(v > 0.999 * 1e4);
        assert!(a <= 2e6);
        assert!(p <= 100.0 * (1.0 + 1e-12));
    }
}
