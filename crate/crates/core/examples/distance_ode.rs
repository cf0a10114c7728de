//! Recovers the source distance at each receiver from its trace alone and
//! compares with the true distance `|x_j - a(t)|`.
//!
//! ```text
//! cargo run --release --example distance_ode -- spiral_lowspeed
//! ```

use movsrc::inverse::{recover_distance, reconstruction_grid};
use movsrc::pipeline::simulate;
use movsrc::ExperimentPreset;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let preset: ExperimentPreset = std::env::args().nth(1).as_deref().unwrap_or("line_example1").parse()?;
    let s = preset.scenario();
    let settings = preset.settings();
    let traces = simulate(&s, &settings)?;
    let grid = reconstruction_grid(s.t0, settings.inverse.step)?;

    for trace in &traces {
        let j = trace.receiver_index;
        let (arrival, d) = recover_distance(trace, &s, grid, &settings.inverse)?;
        let x = s.receivers[j].position;
        let exact_arrival = x.distance(s.orbit.position(0.0)) / s.c;
        let worst = d
            .iter()
            .map(|(t, v)| (v - x.distance(s.orbit.position(t))).abs())
            .fold(0.0, f64::max);
        println!(
            "x{}: arrival {:.9e} s (c x rounding = {:.3e} m), v(0) = {:.6} m, max |v - |x - a|| = {:.3e} m, fallbacks {}",
            j + 1,
            arrival.t_arrival,
            s.c * (arrival.t_arrival - exact_arrival),
            d.v[0],
            worst,
            d.diagnostics.fallback_count
        );
    }
    Ok(())
}
