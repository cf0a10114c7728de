//! Runs one reference preset at one noise level and prints the error.
//!
//! ```text
//! cargo run --release --example preset_experiment -- heart_example2 1e-3 7
//! ```

use std::time::Instant;

use movsrc::pipeline::run_experiment;
use movsrc::{ExperimentPreset, NoiseModel};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let preset: ExperimentPreset = args.next().as_deref().unwrap_or("line_example1").parse()?;
    let epsilon: f64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(0.0);
    let seed: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(1);

    let start = Instant::now();
    let out = run_experiment(&preset.scenario(), &preset.settings(), NoiseModel::new(epsilon, seed))?;
    println!("preset   {preset}");
    println!("epsilon  {epsilon:e}  seed {seed}");
    for a in &out.reconstruction.arrivals {
        println!("arrival  x{}  t = {:.9e}", a.receiver_index + 1, a.t_arrival);
    }
    for d in &out.reconstruction.distances {
        println!(
            "receiver x{}  fallbacks {}  max |dv/dt|/c {:.3e}",
            d.receiver_index + 1,
            d.diagnostics.fallback_count,
            d.diagnostics.max_speed_ratio
        );
    }
    println!("Err      {:.6e}", out.err);
    println!("elapsed  {:.2?}", start.elapsed());
    Ok(())
}
