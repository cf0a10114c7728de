//! Error against noise level for one preset, averaged over seeds, with the
//! least-squares line through the points.
//!
//! ```text
//! cargo run --release --example noise_sweep -- heart_example2 3
//! ```

use movsrc::metrics::{noise_sweep, SweepConfig};
use movsrc::ExperimentPreset;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let preset: ExperimentPreset = args.next().as_deref().unwrap_or("line_example1").parse()?;
    let seeds: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(3);

    let cfg = SweepConfig::new(preset.sweep_epsilons(), seeds);
    let r = noise_sweep(&preset.scenario(), &preset.settings(), &cfg)?;
    println!("{:>10} {:>12} {:>6}", "epsilon", "mean Err", "runs");
    for p in &r.points {
        println!("{:>10.2e} {:>11.4}% {:>6}", p.epsilon, 100.0 * p.err, p.runs);
    }
    println!(
        "fit: Err = {:.4} epsilon + {:.4e}, max relative residual {:.2}%",
        r.slope,
        r.intercept,
        100.0 * r.max_relative_residual
    );
    println!("monotone: {}, failed runs: {}", r.is_monotone(), r.failures.len());
    Ok(())
}
