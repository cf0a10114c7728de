//! Small fixed-size vector type and uniform time grids.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Index, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// A point or vector in three-dimensional space.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3::new(0.0, 0.0, 0.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn dot(self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(self, other: Vec3) -> Vec3 {
        Vec3::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    /// Max-norm, `max_i |v_i|`.
    pub fn norm_inf(self) -> f64 {
        self.x.abs().max(self.y.abs()).max(self.z.abs())
    }

    pub fn distance(self, other: Vec3) -> f64 {
        (self - other).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn map(self, f: impl Fn(f64) -> f64) -> Vec3 {
        Vec3::new(f(self.x), f(self.y), f(self.z))
    }

    pub fn get(self, axis: Axis) -> f64 {
        self[axis.index()]
    }
}

impl From<[f64; 3]> for Vec3 {
    fn from(a: [f64; 3]) -> Self {
        Vec3::new(a[0], a[1], a[2])
    }
}

impl From<Vec3> for [f64; 3] {
    fn from(v: Vec3) -> Self {
        v.to_array()
    }
}

impl Index<usize> for Vec3 {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        match i {
            0 => &self.x,
            1 => &self.y,
            2 => &self.z,
            _ => panic!("Vec3 index out of range: {i}"),
        }
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        v * self
    }
}

impl Div<f64> for Vec3 {
    type Output = Vec3;
    fn div(self, s: f64) -> Vec3 {
        Vec3::new(self.x / s, self.y / s, self.z / s)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl fmt::Display for Vec3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

/// One of the three Cartesian components, numbered 1..=3 in configuration
/// files and CSV headers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    /// Zero-based index.
    pub fn index(self) -> usize {
        self as usize
    }

    /// One-based component number.
    pub fn number(self) -> u8 {
        self as u8 + 1
    }

    pub fn from_number(n: u8) -> Option<Axis> {
        match n {
            1 => Some(Axis::X),
            2 => Some(Axis::Y),
            3 => Some(Axis::Z),
            _ => None,
        }
    }
}

impl TryFrom<u8> for Axis {
    type Error = String;
    fn try_from(n: u8) -> Result<Self, Self::Error> {
        Axis::from_number(n).ok_or_else(|| format!("component must be 1, 2 or 3, got {n}"))
    }
}

impl From<Axis> for u8 {
    fn from(a: Axis) -> u8 {
        a.number()
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

/// Uniform sampling of a time interval. Sample `k` sits at
/// `t_start + k * dt`, computed by multiplication so there is no drift.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub t_start: f64,
    pub dt: f64,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("invalid time grid: {0}")]
pub struct GridError(pub String);

impl TimeGrid {
    pub fn new(t_start: f64, dt: f64, n: usize) -> Result<Self, GridError> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(GridError(format!("dt must be positive and finite, got {dt}")));
        }
        if n < 2 {
            return Err(GridError(format!("need at least 2 samples, got {n}")));
        }
        if !t_start.is_finite() {
            return Err(GridError(format!("t_start must be finite, got {t_start}")));
        }
        Ok(Self { t_start, dt, n })
    }

    /// Smallest grid with step `dt` starting at `t_start` whose last sample is
    /// at or beyond `t_end`.
    pub fn covering(t_start: f64, t_end: f64, dt: f64) -> Result<Self, GridError> {
        if !(t_end > t_start) {
            return Err(GridError(format!("empty interval [{t_start}, {t_end}]")));
        }
        let steps = ((t_end - t_start) / dt - 1e-9).ceil().max(1.0) as usize;
        Self::new(t_start, dt, steps + 1)
    }

    /// Largest grid with step `dt` starting at `t_start` that stays inside
    /// `[t_start, t_end]`.
    pub fn within(t_start: f64, t_end: f64, dt: f64) -> Result<Self, GridError> {
        if !(t_end > t_start) {
            return Err(GridError(format!("empty interval [{t_start}, {t_end}]")));
        }
        let steps = ((t_end - t_start) / dt + 1e-9).floor() as usize;
        Self::new(t_start, dt, steps + 1)
    }

    #[inline]
    pub fn time(&self, k: usize) -> f64 {
        self.t_start + k as f64 * self.dt
    }

    pub fn t_end(&self) -> f64 {
        self.time(self.n - 1)
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |k| self.time(k))
    }

    /// Grid with the same span and half the step.
    pub fn refined(&self) -> TimeGrid {
        TimeGrid {
            t_start: self.t_start,
            dt: self.dt / 2.0,
            n: 2 * self.n - 1,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cross_product_is_right_handed() {
        let x = Vec3::new(1.0, 0.0, 0.0);
        let y = Vec3::new(0.0, 1.0, 0.0);
        assert_eq!(x.cross(y), Vec3::new(0.0, 0.0, 1.0));
        assert_eq!(x.cross(Vec3::new(0.0, 0.0, 1.0)), Vec3::new(0.0, -1.0, 0.0));
    }

    #[test]
    fn grid_times_do_not_drift() {
        let g = TimeGrid::new(0.0, 1e-7, 1_000_001).unwrap();
        assert_eq!(g.time(1_000_000), 1_000_000.0 * 1e-7);
        let mut acc = 0.0;
        for _ in 0..1_000_000 {
            acc += 1e-7;
        }
        assert_ne!(acc, g.time(1_000_000));
    }

    #[test]
    fn grid_rejects_bad_inputs() {
        assert!(TimeGrid::new(0.0, 0.0, 10).is_err());
        assert!(TimeGrid::new(0.0, -1.0, 10).is_err());
        assert!(TimeGrid::new(0.0, 1.0, 1).is_err());
    }

    #[test]
    fn covering_and_within() {
        let c = TimeGrid::covering(0.0, 1.05, 0.1).unwrap();
        assert_eq!(c.n, 12);
        assert!(c.t_end() >= 1.05);
        let w = TimeGrid::within(0.0, 1.05, 0.1).unwrap();
        assert_eq!(w.n, 11);
        assert!(w.t_end() <= 1.05);
        let exact = TimeGrid::covering(0.0, 1.0, 0.1).unwrap();
        assert_eq!(exact.n, 11);
    }

    #[test]
    fn refined_grid_shares_even_points() {
        let g = TimeGrid::new(0.5, 0.25, 9).unwrap();
        let r = g.refined();
        for k in 0..g.n {
            assert_eq!(g.time(k), r.time(2 * k));
        }
    }

    #[test]
    fn axis_numbers_round_trip() {
        for a in Axis::ALL {
            assert_eq!(Axis::from_number(a.number()), Some(a));
        }
        assert!(Axis::from_number(0).is_none());
        assert!(Axis::from_number(4).is_none());
    }
}
