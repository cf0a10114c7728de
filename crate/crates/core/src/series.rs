use crate::error::InverseError;
use crate::geometry::{Axis, TimeGrid, Vec3};

/// Uniformly sampled tangential trace `H x nu` at one receiver.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub grid: TimeGrid,
    pub samples: Vec<Vec3>,
    /// Zero-based index of the receiver in the scenario.
    pub receiver_index: usize,
}

impl TimeSeries {
    pub fn new(grid: TimeGrid, samples: Vec<Vec3>, receiver_index: usize) -> Result<Self, InverseError> {
        if samples.len() != grid.n {
            return Err(InverseError::GridMismatch(format!(
                "{} samples for a grid of {} points",
                samples.len(),
                grid.n
            )));
        }
        if let Some(k) = samples.iter().position(|s| !s.is_finite()) {
            return Err(InverseError::GridMismatch(format!(
                "non-finite sample at index {k} (t = {})",
                grid.time(k)
            )));
        }
        Ok(Self {
            grid,
            samples,
            receiver_index,
        })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// `max_k ||H_k||_inf`, the magnitude scale used by component fallback.
    pub fn scale(&self) -> f64 {
        self.samples.iter().map(|s| s.norm_inf()).fold(0.0, f64::max)
    }

    pub fn component(&self, axis: Axis) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(move |s| s.get(axis))
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, Vec3)> + '_ {
        self.samples
            .iter()
            .enumerate()
            .map(move |(k, &s)| (self.grid.time(k), s))
    }
}
