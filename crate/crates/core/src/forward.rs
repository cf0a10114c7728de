//! Synthetic measurements from the closed-form retarded field of a moving
//! point source.
//!
//! For a receiver at `x` the reception time of a signal emitted at `t` is
//! `g(t) = t + |x - a(t)| / c`. Since the source is subluminal, `g` is
//! strictly increasing and the field at reception time `r` is
//!
//! ```text
//! H(x, r) = He(r - |x - a(0)|/c) f(s) / (4 pi g'(s) |x - a(s)|),   s = g^-1(r)
//! ```
//!
//! The measured quantity is the tangential trace `H x nu`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::ForwardError;
use crate::geometry::{TimeGrid, Vec3};
use crate::orbit::OrbitSpec;
use crate::scenario::Scenario;
use crate::series::TimeSeries;

/// Tolerance of the scan in [`InversionMethod::DigitScan`].
pub const DIGIT_SCAN_EPS: f64 = 1e-7;

/// Relative (to the horizon) tolerance of [`InversionMethod::Bisection`].
pub const BISECTION_REL_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InversionMethod {
    /// Decimal digit-by-digit scan with the trailing `t += 10 dt`
    /// correction kept as is. Its result lands up to one final
    /// step above the true preimage.
    DigitScan,
    Bisection,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GInversionConfig {
    pub method: InversionMethod,
    pub eps_inv: f64,
    /// Search horizon for the emission time.
    pub t_max: f64,
}

impl GInversionConfig {
    pub fn bisection(t_max: f64) -> Self {
        Self {
            method: InversionMethod::Bisection,
            eps_inv: BISECTION_REL_EPS * t_max,
            t_max,
        }
    }

    pub fn digit_scan(t_max: f64) -> Self {
        Self {
            method: InversionMethod::DigitScan,
            eps_inv: DIGIT_SCAN_EPS,
            t_max,
        }
    }

    /// Bisection carried on until the bracket ends are adjacent floats.
    pub fn exact(t_max: f64) -> Self {
        Self {
            method: InversionMethod::Bisection,
            eps_inv: f64::MIN_POSITIVE,
            t_max,
        }
    }

    pub fn with_method(method: InversionMethod, t_max: f64) -> Self {
        match method {
            InversionMethod::Bisection => Self::bisection(t_max),
            InversionMethod::DigitScan => Self::digit_scan(t_max),
        }
    }

    pub fn validate(&self) -> Result<(), ForwardError> {
        if !(self.eps_inv > 0.0) || !(self.t_max > 0.0) {
            return Err(ForwardError::InvalidConfig(format!(
                "eps_inv = {}, t_max = {} must both be positive",
                self.eps_inv, self.t_max
            )));
        }
        Ok(())
    }
}

/// The retarded-time map for one receiver.
#[derive(Debug, Clone, Copy)]
pub struct RetardedMap<'a> {
    pub orbit: &'a OrbitSpec,
    pub x: Vec3,
    pub c: f64,
}

impl<'a> RetardedMap<'a> {
    pub fn new(orbit: &'a OrbitSpec, x: Vec3, c: f64) -> Self {
        Self { orbit, x, c }
    }

    #[inline]
    pub fn g(&self, t: f64) -> f64 {
        t + self.x.distance(self.orbit.position(t)) / self.c
    }

    pub fn g_prime(&self, t: f64) -> Result<f64, ForwardError> {
        let s = self.orbit.eval(t);
        let d = self.x - s.position;
        let dist = d.norm();
        if dist == 0.0 {
            return Err(ForwardError::DegenerateGeometry { t });
        }
        Ok(1.0 - s.velocity.dot(d) / (self.c * dist))
    }

    /// First reception time, `g(0) = |x - a(0)| / c`.
    pub fn arrival(&self) -> f64 {
        self.g(0.0)
    }

    pub fn invert(&self, r: f64, cfg: &GInversionConfig) -> Result<f64, ForwardError> {
        cfg.validate()?;
        let g0 = self.arrival();
        if r < g0 {
            return Err(ForwardError::OutOfRange { r, g0 });
        }
        if self.g(cfg.t_max) < r {
            return Err(ForwardError::Horizon { r, t_max: cfg.t_max });
        }
        Ok(match cfg.method {
            InversionMethod::Bisection => self.bisect(r, 0.0, cfg.t_max, cfg.eps_inv),
            InversionMethod::DigitScan => self.digit_scan(r, cfg),
        })
    }

    /// Bisection on a bracket `g(lo) <= r <= g(hi)`; returns the midpoint of
    /// the final bracket of width at most `eps`.
    fn bisect(&self, r: f64, mut lo: f64, mut hi: f64, eps: f64) -> f64 {
        while hi - lo > eps {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.g(mid) > r {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    fn digit_scan(&self, r: f64, cfg: &GInversionConfig) -> f64 {
        let mut t = 0.0;
        let mut dt = 1.0;
        while dt > cfg.eps_inv {
            if t > cfg.t_max || self.g(t) > r {
                t -= dt;
                dt /= 10.0;
            } else {
                t += dt;
            }
        }
        t + dt * 10.0
    }

    /// Inversion with a bracket seeded from a nearby solved pair
    /// `(r_prev, s_prev)` with `r_prev <= r`. Falls back to the full search
    /// when the seeded bracket does not contain the root.
    fn invert_warm(
        &self,
        r: f64,
        prev: Option<(f64, f64)>,
        slope_floor: f64,
        cfg: &GInversionConfig,
    ) -> Result<f64, ForwardError> {
        if let (InversionMethod::Bisection, Some((r_prev, s_prev))) = (cfg.method, prev) {
            if r >= r_prev && slope_floor > 0.0 {
                let lo = s_prev;
                let hi = (s_prev + (r - r_prev) / slope_floor * (1.0 + 1e-6) + cfg.eps_inv)
                    .min(cfg.t_max);
                if self.g(lo) <= r && self.g(hi) >= r {
                    return Ok(self.bisect(r, lo, hi, cfg.eps_inv));
                }
            }
        }
        self.invert(r, cfg)
    }

    /// Tangential trace at reception time `r` for a receiver with normal `nu`.
    pub fn field(
        &self,
        signal: &crate::signal::SourceSignal,
        nu: Vec3,
        r: f64,
        cfg: &GInversionConfig,
    ) -> Result<Vec3, ForwardError> {
        if r < self.arrival() {
            return Ok(Vec3::ZERO);
        }
        let s = self.invert(r, cfg)?;
        self.field_at_emission(signal, nu, s)
    }

    fn field_at_emission(
        &self,
        signal: &crate::signal::SourceSignal,
        nu: Vec3,
        s: f64,
    ) -> Result<Vec3, ForwardError> {
        let gp = self.g_prime(s)?;
        let dist = self.x.distance(self.orbit.position(s));
        Ok(signal.value(s).cross(nu) / (4.0 * PI * gp * dist))
    }
}

/// `g(t) = t + |x - a(t)| / c`.
pub fn retarded_map_g(o: &OrbitSpec, x: Vec3, c: f64, t: f64) -> f64 {
    RetardedMap::new(o, x, c).g(t)
}

/// `g'(t) = 1 - a'(t).(x - a(t)) / (c |x - a(t)|)`.
pub fn g_derivative(o: &OrbitSpec, x: Vec3, c: f64, t: f64) -> Result<f64, ForwardError> {
    RetardedMap::new(o, x, c).g_prime(t)
}

/// Emission time `t*` with `g(t*) = r` (up to the method's tolerance).
pub fn invert_g(
    o: &OrbitSpec,
    x: Vec3,
    c: f64,
    r: f64,
    cfg: &GInversionConfig,
) -> Result<f64, ForwardError> {
    RetardedMap::new(o, x, c).invert(r, cfg)
}

/// Tangential trace `H(x, t) x nu` of the scenario's source; exactly zero
/// before the first arrival.
pub fn field_at(
    s: &Scenario,
    x: Vec3,
    nu: Vec3,
    t: f64,
    cfg: &GInversionConfig,
) -> Result<Vec3, ForwardError> {
    RetardedMap::new(&s.orbit, x, s.c).field(&s.signal, nu, t, cfg)
}

/// Samples the tangential trace at one receiver on `grid`.
///
/// Each sample is an independent pointwise evaluation; consecutive samples
/// only share a warm-start bracket for the inversion of `g`.
pub fn sample_receiver(
    s: &Scenario,
    receiver_index: usize,
    grid: TimeGrid,
    cfg: &GInversionConfig,
) -> Result<TimeSeries, ForwardError> {
    cfg.validate()?;
    let rx = s.receivers.get(receiver_index).ok_or_else(|| {
        ForwardError::InvalidConfig(format!("no receiver with index {receiver_index}"))
    })?;
    let map = RetardedMap::new(&s.orbit, rx.position, s.c);
    let arrival = map.arrival();
    let slope_floor = 1.0 - s.orbit.declared_c0 / s.c;
    let mut prev = None;
    let mut samples = Vec::with_capacity(grid.n);
    for r in grid.times() {
        if r < arrival {
            samples.push(Vec3::ZERO);
            continue;
        }
        let t_emit = map.invert_warm(r, prev, slope_floor, cfg)?;
        prev = Some((r, t_emit));
        samples.push(map.field_at_emission(&s.signal, rx.normal, t_emit)?);
    }
    Ok(TimeSeries {
        grid,
        samples,
        receiver_index,
    })
}
