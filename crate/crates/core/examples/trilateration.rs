//! Locates points from their distances to four receivers on a sphere and
//! shows how a distance error propagates into the position.

use movsrc::inverse::trilaterate;
use movsrc::{Scenario, Vec3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let rx = Scenario::tetrahedral_receivers(20_000.0).map(|r| r.position);
    let mut rng = ChaCha8Rng::seed_from_u64(3);

    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let p = Vec3::new(
            rng.random_range(-100.0..100.0),
            rng.random_range(-100.0..100.0),
            rng.random_range(-100.0..100.0),
        );
        let got = trilaterate(&rx, rx.map(|x| x.distance(p)))?;
        worst = worst.max((got - p).norm());
    }
    println!("exact distances: worst miss {worst:.3e} m over 10000 points");

    let p = Vec3::new(30.0, -20.0, 10.0);
    for dv in [1e-6, 1e-3, 1.0] {
        let mut v = rx.map(|x| x.distance(p));
        v[0] += dv;
        let got = trilaterate(&rx, v)?;
        println!("distance x1 off by {dv:e} m: position off by {:.3e} m", (got - p).norm());
    }
    Ok(())
}
