use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geom::Point;

/// `m` points in convex position on a random rotated ellipse, with angles
/// jittered inside equal sectors so no three are nearly collinear.
pub fn random_convex(m: usize, seed: u64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (ax, ay) = (rng.gen_range(0.5..1.5), rng.gen_range(0.5..1.5));
    let rot = rng.gen_range(0.0..std::f64::consts::TAU);
    let shift = Point::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
    (0..m)
        .map(|k| {
            let t = std::f64::consts::TAU * (k as f64 + rng.gen_range(0.1..0.9)) / m as f64;
            Point::new(ax * t.cos(), ay * t.sin()).rotated(rot) + shift
        })
        .collect()
}

/// `n` uniform points in the unit square.
pub fn random_points(n: usize, seed: u64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| Point::new(rng.gen(), rng.gen())).collect()
}
