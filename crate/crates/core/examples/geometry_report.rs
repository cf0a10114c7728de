//! Validation report and geometry constants of every preset.

use movsrc::metrics::geometry_constants;
use movsrc::ExperimentPreset;

fn main() {
    for p in ExperimentPreset::ALL {
        let s = p.scenario();
        let k = geometry_constants(&s);
        println!("{p}");
        println!(
            "  d0 = {:.4e}  d1 = {:.4e}  eta = {:.4e}  stability constant = {:.4e}",
            k.d0, k.d1, k.eta, k.c0
        );
        for c in s.validate().checks {
            let mark = if c.passed { "ok" } else { "FAILED" };
            println!("  {:<32} {mark:<6} measured {:.4e}, limit {:.4e}", c.name, c.measured, c.limit);
        }
    }
}
