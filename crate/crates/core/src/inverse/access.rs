//! Measurement access at arbitrary (off-grid) times.

use crate::error::{ForwardError, InverseError};
use crate::forward::{GInversionConfig, RetardedMap};
use crate::geometry::{TimeGrid, Vec3};
use crate::scenario::Scenario;
use crate::series::TimeSeries;

/// Why a field query failed.
#[derive(Debug, Clone, PartialEq)]
pub enum AccessError {
    /// The query lies outside `[start, end]`.
    OutOfRecord { start: f64, end: f64 },
    Forward(ForwardError),
}

/// Read access to the tangential trace at one receiver.
pub trait FieldAccess {
    fn at(&self, t: f64) -> Result<Vec3, AccessError>;

    /// Magnitude scale of the record, `max_t ||H x nu||_inf`.
    fn scale(&self) -> f64;
}

impl AccessError {
    pub(crate) fn into_inverse(self, t: f64, query: f64) -> InverseError {
        match self {
            AccessError::OutOfRecord { start, end } => InverseError::Horizon {
                t,
                query,
                start,
                end,
            },
            AccessError::Forward(e) => InverseError::Forward(e),
        }
    }
}

/// Piecewise-linear interpolation of a sampled record.
///
/// Queries before the detected onset read the onset sample (the right limit
/// of the Heaviside edge), so an RK4 stage sitting on the edge never mixes
/// in the silent sample before it.
#[derive(Debug, Clone)]
pub struct InterpolatedSeries<'a> {
    series: &'a TimeSeries,
    onset: Option<f64>,
    scale: f64,
}

impl<'a> InterpolatedSeries<'a> {
    pub fn new(series: &'a TimeSeries) -> Self {
        Self {
            series,
            onset: None,
            scale: series.scale(),
        }
    }

    pub fn with_onset(mut self, t_arrival: f64) -> Self {
        self.onset = Some(t_arrival);
        self
    }

    fn grid(&self) -> &TimeGrid {
        &self.series.grid
    }
}

impl FieldAccess for InterpolatedSeries<'_> {
    fn at(&self, t: f64) -> Result<Vec3, AccessError> {
        let g = self.grid();
        let (start, end) = (g.t_start, g.t_end());
        let slack = 1e-9 * g.dt;
        if !(t >= start - slack && t <= end + slack) {
            return Err(AccessError::OutOfRecord { start, end });
        }
        let t = match self.onset {
            Some(on) if t < on => on,
            _ => t,
        };
        let u = ((t - start) / g.dt).max(0.0);
        let k = (u.floor() as usize).min(g.n - 2);
        let w = (u - k as f64).min(1.0);
        let s = &self.series.samples;
        if w == 0.0 {
            return Ok(s[k]);
        }
        Ok(s[k] * (1.0 - w) + s[k + 1] * w)
    }

    fn scale(&self) -> f64 {
        self.scale
    }
}

/// Direct evaluation of the forward model, bypassing sampling. Used to
/// isolate integration error from interpolation error.
#[derive(Debug, Clone)]
pub struct ExactField<'a> {
    scenario: &'a Scenario,
    receiver_index: usize,
    cfg: GInversionConfig,
    scale: f64,
}

impl<'a> ExactField<'a> {
    /// `scale` is estimated from 4001 samples over `[0, T]`.
    pub fn new(scenario: &'a Scenario, receiver_index: usize, cfg: GInversionConfig) -> Self {
        let mut f = Self {
            scenario,
            receiver_index,
            cfg,
            scale: 0.0,
        };
        let n = 4001;
        f.scale = (0..n)
            .filter_map(|k| f.at(scenario.t_total * k as f64 / (n - 1) as f64).ok())
            .map(|h| h.norm_inf())
            .fold(0.0, f64::max);
        f
    }
}

impl FieldAccess for ExactField<'_> {
    fn at(&self, t: f64) -> Result<Vec3, AccessError> {
        if !(0.0..=self.scenario.t_total).contains(&t) {
            return Err(AccessError::OutOfRecord {
                start: 0.0,
                end: self.scenario.t_total,
            });
        }
        let rx = &self.scenario.receivers[self.receiver_index];
        RetardedMap::new(&self.scenario.orbit, rx.position, self.scenario.c)
            .field(&self.scenario.signal, rx.normal, t, &self.cfg)
            .map_err(AccessError::Forward)
    }

    fn scale(&self) -> f64 {
        self.scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp() -> TimeSeries {
        let grid = TimeGrid::new(1.0, 0.5, 5).unwrap();
        let samples = vec![
            Vec3::ZERO,
            Vec3::ZERO,
            Vec3::new(2.0, 0.0, 1.0),
            Vec3::new(4.0, 0.0, 1.0),
            Vec3::new(6.0, -2.0, 1.0),
        ];
        TimeSeries::new(grid, samples, 0).unwrap()
    }

    #[test]
    fn linear_interpolation_between_samples() {
        let s = ramp();
        let a = InterpolatedSeries::new(&s);
        assert_eq!(a.at(2.0).unwrap(), Vec3::new(2.0, 0.0, 1.0));
        assert_eq!(a.at(2.25).unwrap(), Vec3::new(3.0, 0.0, 1.0));
        assert_eq!(a.at(3.0).unwrap(), Vec3::new(6.0, -2.0, 1.0));
        assert_eq!(a.at(1.75).unwrap(), Vec3::new(1.0, 0.0, 0.5));
        assert_eq!(a.scale(), 6.0);
    }

    #[test]
    fn onset_gives_right_limit() {
        let s = ramp();
        let a = InterpolatedSeries::new(&s).with_onset(2.0);
        assert_eq!(a.at(1.75).unwrap(), Vec3::new(2.0, 0.0, 1.0));
        assert_eq!(a.at(1.0).unwrap(), Vec3::new(2.0, 0.0, 1.0));
    }

    #[test]
    fn queries_outside_the_record_fail() {
        let s = ramp();
        let a = InterpolatedSeries::new(&s);
        assert!(matches!(a.at(0.9), Err(AccessError::OutOfRecord { .. })));
        assert!(matches!(a.at(3.1), Err(AccessError::OutOfRecord { .. })));
        assert!(a.at(f64::NAN).is_err());
    }
}
