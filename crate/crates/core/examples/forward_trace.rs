//! Samples the tangential field at one receiver of a preset and prints the
//! onset and a few samples around it.
//!
//! ```text
//! cargo run --release --example forward_trace -- heart_example2 2
//! ```

use movsrc::forward::{sample_receiver, GInversionConfig};
use movsrc::pipeline::measurement_grid;
use movsrc::ExperimentPreset;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let preset: ExperimentPreset = args.next().as_deref().unwrap_or("line_example1").parse()?;
    let receiver: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(1);
    let s = preset.scenario();
    let settings = preset.settings();
    let grid = measurement_grid(&s, &settings.measurement)?;
    let trace = sample_receiver(&s, receiver - 1, grid, &GInversionConfig::bisection(s.t_total))?;

    let rx = s.receivers[receiver - 1];
    let onset = trace.samples.iter().position(|h| h.norm_inf() > 0.0).unwrap_or(trace.len());
    println!("receiver x{receiver} at {:?}", rx.position.to_array());
    println!("{} samples, dt = {:e}", trace.len(), grid.dt);
    println!(
        "first arrival {:.9e} s, first non-zero sample {} at t = {:.9e}",
        rx.position.distance(s.orbit.position(0.0)) / s.c,
        onset,
        grid.time(onset)
    );
    println!("{:>16} {:>14} {:>14} {:>14}", "t", "H1", "H2", "H3");
    let stride = (trace.len() - onset).max(10) / 10;
    for k in (onset.saturating_sub(1)..trace.len()).step_by(stride.max(1)).take(12) {
        let h = trace.samples[k];
        println!("{:>16.9e} {:>14.6e} {:>14.6e} {:>14.6e}", grid.time(k), h.x, h.y, h.z);
    }
    Ok(())
}
