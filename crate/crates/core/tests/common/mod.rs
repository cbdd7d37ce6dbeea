#![allow(dead_code)]

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twc::{Point2, PointSet};

/// Points with a minimum pairwise separation, so no pair collapses.
pub fn well_separated(pts: &[Point2]) -> bool {
    let span = pts.iter().flat_map(|p| pts.iter().map(move |q| p.dist(*q))).fold(0.0, f64::max);
    pts.iter().enumerate().all(|(i, p)| pts[i + 1..].iter().all(|q| p.dist(*q) > 1e-3 * span))
}

pub fn points(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<Point2>> {
    prop::collection::vec((-100.0..100.0f64, -100.0..100.0f64), n)
        .prop_map(|v| v.into_iter().map(|(x, y)| Point2::new(x, y)).collect::<Vec<_>>())
        .prop_filter("separated", |p| well_separated(p))
}

pub fn set(pts: &[Point2]) -> PointSet {
    PointSet::from_positions("random", pts).expect("valid set")
}

/// Seeded uniform random set in [0,100)^2.
pub fn random_set(seed: u64, n: usize) -> PointSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let pts: Vec<Point2> = (0..n).map(|_| Point2::new(rng.random_range(0.0..100.0), rng.random_range(0.0..100.0))).collect();
        if well_separated(&pts) {
            return set(&pts);
        }
    }
}

pub fn rotate(p: Point2, angle: f64) -> Point2 {
    let (s, c) = angle.sin_cos();
    Point2::new(c * p.x - s * p.y, s * p.x + c * p.y)
}

pub fn equilateral() -> PointSet {
    PointSet::planar("tri", [("a", 0.0, 0.0), ("b", 1.0, 0.0), ("c", 0.5, 3f64.sqrt() / 2.0)]).unwrap()
}

pub fn unit_square() -> PointSet {
    PointSet::planar("square", [("a", 0.0, 0.0), ("b", 1.0, 0.0), ("c", 1.0, 1.0), ("d", 0.0, 1.0)]).unwrap()
}
