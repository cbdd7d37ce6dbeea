mod common;

use common::{equilateral, random_set, rotate, set, unit_square};
use proptest::prelude::*;
use twc::geometry::{convex_hull, in_convex_hull};
use twc::reference::{etruscan_points, hus_points};
use twc::sweep::weighted_centroid;
use twc::{
    alpha_sweep, alpha_sweep_with, beta_sweep, entropy, euclidean_matrix, free_energy, indirect_geometry, loo_alpha,
    loo_alpha_with, recursive_collapse, twc, weights_alpha, Point2, PointSet, SweepConfig, Unbracketed,
};

fn boundary() -> SweepConfig {
    SweepConfig { unbracketed: Unbracketed::Boundary, ..SweepConfig::default() }
}

/// Indirect distance by direct enumeration of the third points.
fn dbar_oracle(ps: &PointSet, i: usize, j: usize) -> f64 {
    let p = ps.positions();
    let n = p.len();
    let ks = (0..n).filter(|&k| k != i && k != j);
    let s: f64 = ks.clone().map(|k| p[i].dist(p[k])).sum();
    s / ks.count() as f64
}

#[test]
fn indirect_matches_enumeration() {
    let ps = random_set(7, 10);
    let g = indirect_geometry(&euclidean_matrix(&ps)).unwrap();
    for i in 0..10 {
        for j in 0..10 {
            if i != j {
                assert!((g.dbar.get(i, j) - dbar_oracle(&ps, i, j)).abs() < 1e-9);
            }
        }
    }
    assert!(g.grand_sum().abs() <= 1e-6 * g.abs_sum());
}

#[test]
fn uniform_weights_give_center_of_mass() {
    let ps = random_set(3, 9);
    let c = twc(&ps, &[1.0; 9]).unwrap();
    assert_eq!(c, ps.center_of_mass());
    let first = twc(&ps, &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
    assert_eq!(first, ps.points()[0].pos);
}

#[test]
fn entropy_direct_sum() {
    let w = [0.3, 1.7, 0.05, 2.2, 0.9];
    let z: f64 = w.iter().sum();
    let h: f64 = -w.iter().map(|x| x / z * (x / z).log2()).sum::<f64>();
    assert!((entropy(&w) - h).abs() < 1e-12);
    assert_eq!(entropy(&[1.0; 4]), 2.0);
    assert!(entropy(&[1.0, 1e-200, 1e-200]) < 1e-100);
}

#[test]
fn free_energy_of_equilateral_triangle() {
    let g = indirect_geometry(&euclidean_matrix(&equilateral())).unwrap();
    let w = weights_alpha(&g, 1.0).unwrap();
    assert!((free_energy(&w, 1.0).unwrap() - (1.0 - 3f64.ln())).abs() < 1e-12);
    assert_eq!(free_energy(&[1.0], 2.0).unwrap(), 0.0);
}

#[test]
fn outliers_have_the_weakest_attraction() {
    let mut pts: Vec<(String, f64, f64)> = (0..8).map(|k| {
        let a = k as f64 * std::f64::consts::TAU / 8.0;
        (format!("c{k}"), 10.0 + 2.0 * a.cos(), 10.0 + 2.0 * a.sin())
    }).collect();
    pts.push(("o1".into(), 40.0, 12.0));
    pts.push(("o2".into(), -15.0, 30.0));
    let ps = PointSet::planar("outliers", pts).unwrap();
    let g = indirect_geometry(&euclidean_matrix(&ps)).unwrap();
    let w = weights_alpha(&g, 5.0).unwrap();
    let inner = w[..8].iter().cloned().fold(f64::INFINITY, f64::min);
    assert!(w[8] < inner && w[9] < inner, "{w:?}");
}

#[test]
fn square_alpha_point_is_its_center() {
    for s in [1.0, 7.5] {
        let sq = unit_square().map_positions(twc::Crs::Planar, |p| p.scale(s));
        let ar = alpha_sweep_with(&sq, &boundary()).unwrap();
        assert!(ar.alpha_point.dist(Point2::new(0.5 * s, 0.5 * s)) < 1e-12 * s);
    }
}

#[test]
fn hus_alpha_point_near_hanover() {
    let ar = alpha_sweep(&hus_points()).unwrap();
    let (lon, lat) = twc::reference::HANOVER;
    let km = twc::geometry::haversine_km(ar.alpha_point.y, ar.alpha_point.x, lat, lon);
    assert!(km < 100.0, "{km} km");
}

#[test]
fn beta_sweep_shapes() {
    let tri = beta_sweep(&equilateral()).unwrap();
    assert!(tri.symmetric);
    assert!(tri.trace.steps.iter().all(|s| s.dist_from_mass_center < 1e-12));

    let br = beta_sweep(&etruscan_points()).unwrap();
    assert!(br.bracketed && br.beta_star > 0.0 && br.beta_star.is_finite());
    assert!((br.beta_star - 3.0526).abs() < 1e-3, "{}", br.beta_star);
    let curve: Vec<f64> = br.trace.steps.iter().map(|s| s.dist_from_mass_center).collect();
    let peak = curve.iter().cloned().fold(0.0, f64::max);
    assert_eq!(curve[0], 0.0);
    assert!(*curve.last().unwrap() < 0.05 * peak);
}

#[test]
fn collapse_of_equilateral_and_random_sets() {
    let g = indirect_geometry(&euclidean_matrix(&equilateral())).unwrap();
    assert_eq!(recursive_collapse(&g, 10).depth, Some(1));

    let g = indirect_geometry(&euclidean_matrix(&random_set(11, 20))).unwrap();
    let rep = recursive_collapse(&g, 200);
    assert!(rep.collapsed());
    assert!(rep.spreads.windows(2).all(|w| w[1] < w[0] || w[1] == 0.0), "{:?}", rep.spreads);
}

#[test]
fn hus_leave_one_out_has_two_candidates() {
    let rep = loo_alpha(&hus_points()).unwrap();
    assert_eq!(rep.folds.len(), 13);
    assert_eq!(rep.candidates.len(), 2);
    let total: f64 = rep.candidates.iter().map(|c| c.share).sum();
    assert!((total - 1.0).abs() < 1e-12);
    assert!(rep.candidates[0].share >= 0.75);
}

#[test]
fn square_leave_one_out_gives_four_symmetric_points() {
    let rep = loo_alpha_with(&unit_square(), &boundary()).unwrap();
    assert_eq!(rep.candidates.len(), 4);
    let c = Point2::new(0.5, 0.5);
    let r0 = rep.folds[0].alpha_point.dist(c);
    for f in &rep.folds {
        assert!((f.alpha_point.dist(c) - r0).abs() < 1e-9);
    }
    // each fold's point lies inside its own three-point triangle
    for (k, f) in rep.folds.iter().enumerate() {
        let tri = unit_square().without(k).unwrap().positions();
        assert!(in_convex_hull(&convex_hull(&tri), f.alpha_point, 1e-12));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn conservation(pts in common::points(4..=30)) {
        let g = indirect_geometry(&euclidean_matrix(&set(&pts))).unwrap();
        prop_assert!(g.grand_sum().abs() / g.abs_sum() < 1e-9);
        for i in 0..g.n() {
            prop_assert!(g.row_sum(i).abs() <= 1e-9 * g.abs_sum());
        }
    }

    #[test]
    fn weighted_centroid_stays_in_hull(pts in common::points(3..=15), seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let w: Vec<f64> = pts.iter().map(|_| rng.random_range(0.0..1.0)).collect();
        let c = weighted_centroid(&pts, &w).unwrap();
        prop_assert!(in_convex_hull(&convex_hull(&pts), c, 1e-9));
    }

    #[test]
    fn sweep_starts_at_center_of_mass_and_entropy_falls(pts in common::points(4..=12)) {
        let ps = set(&pts);
        let ar = alpha_sweep_with(&ps, &boundary()).unwrap();
        let s0 = ar.trace.steps[0];
        prop_assert_eq!(s0.twc, ps.center_of_mass());
        prop_assert!((s0.entropy - (pts.len() as f64).log2()).abs() < 1e-9);
        for w in ar.trace.steps.windows(2).take_while(|w| w[1].param <= ar.alpha_star) {
            prop_assert!(w[1].entropy <= w[0].entropy + 1e-12);
        }
    }

    #[test]
    fn alpha_point_follows_rigid_motion(pts in common::points(4..=10), angle in 0.0..std::f64::consts::TAU, tx in -500.0..500.0f64, ty in -500.0..500.0f64) {
        let cfg = boundary();
        let a = alpha_sweep_with(&set(&pts), &cfg).unwrap();
        let moved: Vec<Point2> = pts.iter().map(|p| rotate(*p, angle).add(Point2::new(tx, ty))).collect();
        let b = alpha_sweep_with(&set(&moved), &cfg).unwrap();
        let d = euclidean_matrix(&set(&pts)).max_d();
        let expect = rotate(a.alpha_point, angle).add(Point2::new(tx, ty));
        prop_assert!(b.alpha_point.dist(expect) <= 1e-9 * d, "off by {}", b.alpha_point.dist(expect) / d);
    }

    #[test]
    fn alpha_point_scales(pts in common::points(4..=10), s in 0.01..100.0f64) {
        let cfg = boundary();
        let a = alpha_sweep_with(&set(&pts), &cfg).unwrap();
        let scaled: Vec<Point2> = pts.iter().map(|p| p.scale(s)).collect();
        let b = alpha_sweep_with(&set(&scaled), &cfg).unwrap();
        let d = euclidean_matrix(&set(&scaled)).max_d();
        prop_assert!((a.alpha_star - b.alpha_star).abs() <= 1e-6);
        prop_assert!(b.alpha_point.dist(a.alpha_point.scale(s)) <= 1e-9 * d);
    }
}
