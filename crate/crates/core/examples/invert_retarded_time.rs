//! Inverts the retarded map `g(t) = t + |x - a(t)| / c` with the digit scan
//! and with bisection and reports how far apart they land.
//!
//! ```text
//! cargo run --release --example invert_retarded_time -- spiral_example3
//! ```

use std::time::Instant;

use movsrc::forward::{invert_g, retarded_map_g, GInversionConfig};
use movsrc::ExperimentPreset;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let preset: ExperimentPreset = std::env::args().nth(1).as_deref().unwrap_or("line_example1").parse()?;
    let s = preset.scenario();
    let x = s.receivers[0].position;
    let n = 2000;

    for cfg in [GInversionConfig::digit_scan(s.t_total), GInversionConfig::bisection(s.t_total)] {
        let start = Instant::now();
        let mut worst: f64 = 0.0;
        for k in 0..n {
            let t = s.t0 * k as f64 / (n - 1) as f64;
            let back = invert_g(&s.orbit, x, s.c, retarded_map_g(&s.orbit, x, s.c, t), &cfg)?;
            worst = worst.max((back - t).abs());
        }
        println!(
            "{:?}: eps {:e}, max |g^-1(g(t)) - t| = {:.3e} s over {n} times, {:.2?}",
            cfg.method,
            cfg.eps_inv,
            worst,
            start.elapsed()
        );
    }
    Ok(())
}
