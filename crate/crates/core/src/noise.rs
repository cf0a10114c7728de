//! Multiplicative uniform measurement noise `h -> h (1 + 2 eps u - eps)`,
//! `u ~ U[0, 1)`.
//!
//! Draws are keyed on `(seed, receiver, sample, component)`: the seed selects
//! the generator key, the receiver selects the ChaCha stream, and draw
//! `3 * sample + component` sits at a fixed word position in that stream.
//! Any subset of samples can therefore be regenerated in any order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::geometry::Vec3;
use crate::series::TimeSeries;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub epsilon: f64,
    pub seed: u64,
    /// One draw per sample shared by all three components instead of one
    /// draw per component.
    #[serde(default)]
    pub per_sample_scalar: bool,
}

impl NoiseModel {
    pub fn new(epsilon: f64, seed: u64) -> Self {
        Self {
            epsilon,
            seed,
            per_sample_scalar: false,
        }
    }

    pub fn none() -> Self {
        Self::new(0.0, 0)
    }

    pub fn is_identity(&self) -> bool {
        self.epsilon == 0.0
    }

    #[inline]
    fn multiplier(&self, u: f64) -> f64 {
        1.0 + 2.0 * self.epsilon * u - self.epsilon
    }

    fn stream(&self, receiver_index: usize) -> NoiseStream {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(receiver_index as u64);
        NoiseStream { rng }
    }

    /// The multiplier applied to `component` of `sample` at `receiver_index`.
    pub fn multiplier_at(&self, receiver_index: usize, sample: usize, component: usize) -> f64 {
        let mut s = self.stream(receiver_index);
        let component = if self.per_sample_scalar { 0 } else { component };
        s.seek(3 * sample as u128 + component as u128);
        self.multiplier(s.uniform())
    }
}

struct NoiseStream {
    rng: ChaCha8Rng,
}

impl NoiseStream {
    /// Each draw consumes one 64-bit value, i.e. two 32-bit words.
    fn seek(&mut self, draw: u128) {
        self.rng.set_word_pos(2 * draw);
    }

    fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }
}

/// Returns a noisy copy of `series`. Zero samples stay exactly zero.
pub fn apply_noise(series: &TimeSeries, m: &NoiseModel) -> TimeSeries {
    if m.is_identity() {
        return series.clone();
    }
    let mut s = m.stream(series.receiver_index);
    s.seek(0);
    let samples = series
        .samples
        .iter()
        .map(|h| {
            let u = [s.uniform(), s.uniform(), s.uniform()];
            if m.per_sample_scalar {
                *h * m.multiplier(u[0])
            } else {
                Vec3::new(
                    h.x * m.multiplier(u[0]),
                    h.y * m.multiplier(u[1]),
                    h.z * m.multiplier(u[2]),
                )
            }
        })
        .collect();
    TimeSeries {
        grid: series.grid,
        samples,
        receiver_index: series.receiver_index,
    }
}
