//! Multiplicative uniform noise: draws are reproducible per seed, bounded by
//! `epsilon` and independent of how the trace is traversed.

use movsrc::noise::apply_noise;
use movsrc::{NoiseModel, TimeGrid, TimeSeries, Vec3};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = TimeGrid::new(0.0, 1e-3, 1000)?;
    let samples = grid
        .times()
        .map(|t| if t < 0.1 { Vec3::ZERO } else { Vec3::new(1.0, -2.0, 0.5) * t.sin() })
        .collect();
    let clean = TimeSeries::new(grid, samples, 0)?;

    for eps in [1e-4, 1e-2, 0.12] {
        let m = NoiseModel::new(eps, 7);
        let noisy = apply_noise(&clean, &m);
        let worst = clean
            .samples
            .iter()
            .zip(&noisy.samples)
            .flat_map(|(a, b)| (0..3).map(move |k| (a.to_array()[k], b.to_array()[k])))
            .filter(|(a, _)| *a != 0.0)
            .map(|(a, b)| (b / a - 1.0).abs())
            .fold(0.0, f64::max);
        let silent = noisy.samples[..100].iter().all(|h| *h == Vec3::ZERO);
        println!("epsilon {eps:>6}: max |noisy/clean - 1| = {worst:.4e}, silence kept: {silent}");
    }

    let m = NoiseModel::new(0.05, 7);
    println!(
        "multiplier of receiver 1, sample 500, component 2: {:.12} (same on every call: {})",
        m.multiplier_at(0, 500, 1),
        m.multiplier_at(0, 500, 1) == apply_noise(&clean, &m).samples[500].y / clean.samples[500].y
    );
    Ok(())
}
