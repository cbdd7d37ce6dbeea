mod common;

use common::{equilateral, random_set, rotate};
use proptest::prelude::*;
use twc::geometry::{convex_hull, in_convex_hull};
use twc::metadistance::{
    classical_mds, meta_distance, meta_distance_trace, metacluster_field, mds_project, optimal_matrix, stress,
    vanishing_points, MetaConfig, MetaDistanceTrace, MetaIteration,
};
use twc::reference::{etruscan_matrix, etruscan_points};
use twc::{euclidean_matrix, GridWindow, Point2};

fn synthetic(s: &[f64]) -> MetaDistanceTrace {
    let iterations = s
        .iter()
        .enumerate()
        .map(|(t, &s_t)| {
            let delta_s = if t == 0 { 0.0 } else { s_t - s[t - 1] };
            let j = if t > 0 && delta_s != 0.0 { (s_t / delta_s.abs()).ln() * delta_s.signum() } else { f64::NAN };
            MetaIteration { t, m: vec![0.0; 9], s: s_t, delta_s, j, delta_m: 0.0 }
        })
        .collect();
    MetaDistanceTrace { n: 3, iterations, converged: true, converged_at: s.len() - 1, optimal_at: 0, scale: 1.0, offset: 0.0 }
}

#[test]
fn increasing_cost_selects_last_iteration() {
    let mut tr = synthetic(&[1.0, 2.0, 2.5, 2.7, 2.75]);
    assert_eq!(optimal_matrix(&mut tr).0, 4);
}

#[test]
fn negative_cost_steps_lose_to_positive_ones() {
    // |ΔS| = 0.5 both ways; only the rising step may win
    let mut tr = synthetic(&[4.0, 4.5, 4.0, 4.1]);
    let (t, _) = optimal_matrix(&mut tr);
    assert!(tr.iterations[t].delta_s > 0.0);
    let direct: Vec<f64> = tr.iterations[1..].iter().map(|it| it.j).collect();
    assert!(direct[1] < 0.0 && direct[0] > 0.0);
}

#[test]
fn terminal_zero_change_wins() {
    let mut tr = synthetic(&[1.0, 2.0, 2.5, 2.5]);
    assert_eq!(optimal_matrix(&mut tr).0, 3);
}

#[test]
fn equilateral_is_a_fixed_point_with_single_cluster_warning() {
    let ps = equilateral();
    let tr = meta_distance(&euclidean_matrix(&ps)).unwrap();
    assert!(tr.converged_at <= 2);
    let proj = mds_project(&tr.rescaled_at(tr.optimal_at), &ps).unwrap();
    let vp = vanishing_points(&proj, &tr.matrix_at(tr.optimal_at));
    assert_eq!(vp.clusters.len(), 1);
    assert!(!vp.warnings.is_empty());
}

#[test]
fn etruscan_trace_invariants_and_partition() {
    let (labels, d) = etruscan_matrix();
    let tr = meta_distance(&d).unwrap();
    for it in &tr.iterations {
        let m = &it.m;
        for i in 0..12 {
            assert_eq!(m[i * 12 + i], 0.0);
            for j in 0..12 {
                assert_eq!(m[i * 12 + j], m[j * 12 + i]);
                assert!((0.0..=1.0).contains(&m[i * 12 + j]));
            }
        }
    }
    assert!(tr.iterations.last().unwrap().delta_m < 1e-8);
    assert!(tr.iterations.last().unwrap().s > 0.0);

    let ps = etruscan_points();
    let t = tr.optimal_at;
    let proj = mds_project(&tr.rescaled_at(t), &ps).unwrap();
    let at_star = vanishing_points(&proj, &tr.matrix_at(t));
    let at_end = vanishing_points(&proj, &tr.final_matrix());
    assert_eq!(at_star.labels, at_end.labels);
    let west: Vec<&str> = at_star.clusters[0].members.iter().map(|&i| labels[i].as_str()).collect();
    assert_eq!(west, ["Volterra", "Populonia", "Vetulonia", "Roselle"]);
    for (mu, name) in [(0.8586, "Populonia"), (0.8418, "Bolsena")] {
        let i = labels.iter().position(|l| l == name).unwrap();
        assert!((at_star.own_membership()[i] - mu).abs() < 0.05);
    }
    let hull = convex_hull(&ps.positions());
    assert!(at_star.clusters.iter().any(|c| !in_convex_hull(&hull, c.centroid, 1e-9)));

    // projected points collapse into two tight groups
    for c in &at_star.clusters {
        let spread = c.members.iter().map(|&i| proj.projected[i].dist(c.centroid)).fold(0.0, f64::max);
        assert!(spread < 0.05 * d.max_d(), "{spread}");
    }
}

#[test]
fn metacluster_field_peaks_near_vanishing_points() {
    let (_, d) = etruscan_matrix();
    let ps = etruscan_points();
    let tr = meta_distance(&d).unwrap();
    let proj = mds_project(&tr.rescaled_at(tr.optimal_at), &ps).unwrap();
    let vp = vanishing_points(&proj, &tr.matrix_at(tr.optimal_at));
    let mut frame = ps.positions();
    frame.extend(&proj.projected);
    let w = GridWindow::around(&frame, 80, 80, 0.1).unwrap();
    let f = metacluster_field(&proj, &w);
    assert!(f.values.iter().all(|&v| v > 0.0 && v <= 1.0));
    let (r, c) = f.argmax();
    let peak = w.cell_center(r, c);
    let nearest_vp = vp.clusters.iter().map(|k| k.centroid.dist(peak)).fold(f64::INFINITY, f64::min);
    let nearest_town = ps.positions().iter().map(|p| p.dist(peak)).fold(f64::INFINITY, f64::min);
    assert!(nearest_vp < nearest_town, "peak {peak:?}");
}

#[test]
fn identical_projection_uses_uniform_weights() {
    let ps = random_set(2, 6);
    let proj = mds_project(&euclidean_matrix(&ps), &ps).unwrap();
    let w = GridWindow::around(&ps.positions(), 20, 20, 0.1).unwrap();
    let f = metacluster_field(&proj, &w);
    assert!(f.in_unit_interval() && f.min() > 0.0);
}

#[test]
fn iteration_cap_reports_not_converged() {
    let (_, d) = etruscan_matrix();
    let tr = meta_distance_trace(&d, &MetaConfig { max_iterations: 5, ..Default::default() }).unwrap();
    assert!(!tr.converged);
    assert_eq!(tr.converged_at, 5);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn exact_embedding_is_recovered(pts in common::points(3..=12)) {
        let ps = common::set(&pts);
        let d = euclidean_matrix(&ps);
        let proj = mds_project(&d, &ps).unwrap();
        for (a, b) in proj.projected.iter().zip(&pts) {
            prop_assert!(a.dist(*b) < 1e-6 * d.max_d());
        }
        prop_assert!(proj.stress < 1e-6);
        let emb = classical_mds(&d);
        prop_assert!(stress(&emb.coords, &d) < 1e-6);
    }

    #[test]
    fn two_cluster_memberships_sum_to_one(pts in common::points(6..=12)) {
        let ps = common::set(&pts);
        let tr = meta_distance(&euclidean_matrix(&ps)).unwrap();
        let proj = mds_project(&tr.rescaled_at(tr.optimal_at), &ps).unwrap();
        let vp = vanishing_points(&proj, &tr.matrix_at(tr.optimal_at));
        if vp.clusters.len() == 2 {
            for mu in &vp.memberships {
                prop_assert!((mu[0] + mu[1] - 1.0).abs() < 1e-12);
                prop_assert!(mu.iter().all(|&m| m > 0.0 && m < 1.0));
            }
        }
    }

    #[test]
    fn meta_distance_ignores_rigid_motion(pts in common::points(4..=10), angle in 0.0..std::f64::consts::TAU, tx in -100.0..100.0f64) {
        let a = meta_distance(&euclidean_matrix(&common::set(&pts))).unwrap();
        let moved: Vec<Point2> = pts.iter().map(|p| rotate(*p, angle).add(Point2::new(tx, -tx))).collect();
        let b = meta_distance(&euclidean_matrix(&common::set(&moved))).unwrap();
        let (ma, mb) = (a.final_matrix(), b.final_matrix());
        for i in 0..pts.len() {
            for j in 0..pts.len() {
                prop_assert!((ma.get(i, j) - mb.get(i, j)).abs() < 1e-9, "{} vs {}", ma.get(i, j), mb.get(i, j));
            }
        }
    }
}
