mod common;

use common::{equilateral, random_set, rotate, unit_square};
use proptest::prelude::*;
use twc::dataset::MatrixKind;
use twc::fields::{
    activation_histogram, alpha_map, beta_map, gamma_clusters, gamma_map, gamma_trajectories, minimum_spanning_tree,
    nl_mst, theta_map, theta_paths, GammaLabel,
};
use twc::geometry::centroid;
use twc::reference::etruscan_points;
use twc::{alpha_sweep, alpha_sweep_with, beta_sweep, DistanceMatrix, GridWindow, Point2, PointSet, SweepConfig, Unbracketed};

/// Decode a Prüfer sequence into the edges of a labeled tree.
fn prufer_edges(seq: &[usize], n: usize) -> Vec<(usize, usize)> {
    let mut degree = vec![1; n];
    for &s in seq {
        degree[s] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &s in seq {
        let leaf = (0..n).find(|&v| degree[v] == 1).unwrap();
        edges.push((leaf, s));
        degree[leaf] -= 1;
        degree[s] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

/// Minimum weight over every labeled spanning tree of the complete graph.
fn exhaustive_min(w: &DistanceMatrix) -> f64 {
    let n = w.n();
    if n == 2 {
        return w.get(0, 1);
    }
    let total = n.pow((n - 2) as u32);
    (0..total)
        .map(|mut code| {
            let seq: Vec<usize> = (0..n - 2)
                .map(|_| {
                    let d = code % n;
                    code /= n;
                    d
                })
                .collect();
            prufer_edges(&seq, n).iter().map(|&(a, b)| w.get(a, b)).sum::<f64>()
        })
        .fold(f64::INFINITY, f64::min)
}

fn is_spanning_tree(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut comp: Vec<usize> = (0..n).collect();
    fn find(c: &mut Vec<usize>, x: usize) -> usize {
        if c[x] != x {
            let r = find(c, c[x]);
            c[x] = r;
        }
        c[x]
    }
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut comp, a), find(&mut comp, b));
        if ra == rb {
            return false;
        }
        comp[ra] = rb;
    }
    edges.len() == n - 1
}

#[test]
fn prufer_decoder_covers_cayley_count() {
    let mut seen = std::collections::BTreeSet::new();
    for code in 0..16usize {
        let mut e = prufer_edges(&[code % 4, code / 4], 4);
        assert!(is_spanning_tree(4, &e));
        e.iter_mut().for_each(|p| *p = (p.0.min(p.1), p.0.max(p.1)));
        e.sort();
        seen.insert(e);
    }
    assert_eq!(seen.len(), 16);
}

#[test]
fn square_trajectories_are_all_boundary() {
    let t = gamma_trajectories(&unit_square().positions()).unwrap();
    let cl = gamma_clusters(&t, 0.02);
    assert!(cl.labels.iter().all(|l| *l == GammaLabel::Boundary));
    assert!(cl.warning.is_some());
}

#[test]
fn trajectories_start_at_center_and_reach_targets() {
    let ps = random_set(5, 9);
    let pts = ps.positions();
    let d = DistanceMatrix::euclidean(&pts).max_d();
    for t in gamma_trajectories(&pts).unwrap() {
        assert_eq!(t.samples[0], centroid(&pts));
        assert!(t.converged);
        assert!(t.samples.last().unwrap().dist(pts[t.point_index]) < 1e-3 * d);
    }
}

#[test]
fn theta_dominates_chords_and_endpoint_distances() {
    let ps = random_set(17, 7);
    let pts = ps.positions();
    let d = DistanceMatrix::euclidean(&pts);
    let trajs = gamma_trajectories(&pts).unwrap();
    let samples: Vec<Vec<Point2>> = trajs.iter().map(|t| t.samples.clone()).collect();
    let (set, theta) = theta_paths(&pts, trajs).unwrap();
    for i in 0..7 {
        assert_eq!(theta.get(i, i), 0.0);
        for j in 0..7 {
            if i != j {
                let p = set.path(i, j);
                let chord = p.samples[0].dist(*p.samples.last().unwrap());
                assert!(p.length >= chord - 1e-12);
                // paths stop at the shorter trajectory; the longer one's remaining gap bounds the shortfall
                let z = samples[i].len().min(samples[j].len());
                let gap = pts[i].dist(samples[i][z - 1]) + pts[j].dist(samples[j][z - 1]);
                assert!(theta.get(i, j) >= d.get(i, j) - gap - 1e-9 * d.max_d());
                assert!(gap <= 0.05 * d.max_d());
            }
        }
    }
}

#[test]
fn etruscan_gamma_map_favours_the_south() {
    let ps = etruscan_points();
    let br = beta_sweep(&ps).unwrap();
    let w = GridWindow::around(&ps.positions(), 60, 60, 0.1).unwrap();
    let g = gamma_map(&ps, &gamma_trajectories(&ps.positions()).unwrap(), &br, &w).unwrap();
    let at = |name: &str| g.sample(ps.points()[ps.index_of(name).unwrap()].pos).unwrap();
    assert!(at("Vulci") + at("Tarquinia") >= at("Vetulonia") + at("Roselle"));
}

#[test]
fn etruscan_alpha_histogram_tail_decreases() {
    let ps = etruscan_points();
    let (ar, br) = (alpha_sweep(&ps).unwrap(), beta_sweep(&ps).unwrap());
    let w = GridWindow::around(&ps.positions(), 80, 80, 0.1).unwrap();
    let h = activation_histogram(&alpha_map(&ps, &ar, &br, &w).unwrap(), 10);
    assert!((h.iter().map(|b| b.1).sum::<f64>() - 1.0).abs() < 1e-12);
    let tail: Vec<f64> = h.iter().filter(|b| b.0 >= 0.4 - 1e-12).map(|b| b.1).collect();
    assert!(tail.windows(2).all(|p| p[1] <= p[0]), "{h:?}");
}

#[test]
fn three_point_fields_in_unit_interval() {
    let ps = equilateral();
    let ar = alpha_sweep_with(&ps, &SweepConfig { unbracketed: Unbracketed::Boundary, ..Default::default() }).unwrap();
    let br = beta_sweep(&ps).unwrap();
    let w = GridWindow::around(&ps.positions(), 30, 30, 0.1).unwrap();
    assert!(ar.alpha_point.dist(centroid(&ps.positions())) < 1e-12);
    let g = gamma_map(&ps, &gamma_trajectories(&ps.positions()).unwrap(), &br, &w).unwrap();
    let aug = ps.with_point("alpha", ar.alpha_point).unwrap().positions();
    let (set, theta) = theta_paths(&aug, gamma_trajectories(&aug).unwrap()).unwrap();
    let t = theta_map(&ps, &nl_mst(&theta, &set), &br, &w).unwrap();
    for grid in [alpha_map(&ps, &ar, &br, &w).unwrap(), beta_map(&ps, &br, &w).unwrap(), g, t] {
        assert!(grid.in_unit_interval());
    }
}

fn mirrored(ps: &PointSet) -> PointSet {
    ps.map_positions(ps.crs(), |p| Point2::new(-p.x, p.y))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn mst_matches_exhaustive_minimum(n in 2usize..=6, seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let raw: Vec<f64> = (0..n * n).map(|_| rng.random_range(0.1..10.0)).collect();
        let w = DistanceMatrix::from_fn(n, MatrixKind::Theta, |i, j| if i == j { 0.0 } else { raw[i.min(j) * n + i.max(j)] }).unwrap();
        let tree = minimum_spanning_tree(&w);
        let edges: Vec<(usize, usize)> = tree.iter().map(|e| (e.0, e.1)).collect();
        prop_assert!(is_spanning_tree(n, &edges));
        let weight: f64 = tree.iter().map(|e| e.2).sum();
        prop_assert!((weight - exhaustive_min(&w)).abs() < 1e-9);
    }

    #[test]
    fn nl_mst_is_minimal_over_theta(pts in common::points(3..=5)) {
        let ps = common::set(&pts);
        let ar = alpha_sweep_with(&ps, &SweepConfig { unbracketed: Unbracketed::Boundary, ..Default::default() }).unwrap();
        let aug = match ps.with_point("alpha", ar.alpha_point) { Ok(a) => a, Err(_) => return Ok(()) };
        let pos = aug.positions();
        let (set, theta) = theta_paths(&pos, gamma_trajectories(&pos).unwrap()).unwrap();
        let mst = nl_mst(&theta, &set);
        prop_assert_eq!(mst.edges.len(), pos.len() - 1);
        let edges: Vec<(usize, usize)> = mst.edges.iter().map(|e| (e.a, e.b)).collect();
        prop_assert!(is_spanning_tree(pos.len(), &edges));
        prop_assert!((mst.total_weight - exhaustive_min(&theta.symmetrized())).abs() < 1e-9 * mst.total_weight);
    }

    #[test]
    fn mirror_swaps_bend_signs(pts in common::points(4..=9)) {
        let ps = common::set(&pts);
        let a = gamma_clusters(&gamma_trajectories(&ps.positions()).unwrap(), 0.02);
        let b = gamma_clusters(&gamma_trajectories(&mirrored(&ps).positions()).unwrap(), 0.02);
        for (x, y) in a.bends.iter().zip(&b.bends) {
            prop_assert!((x + y).abs() < 1e-9);
        }
        for ((la, lb), x) in a.labels.iter().zip(&b.labels).zip(&a.bends) {
            if (x.abs() - 0.02).abs() > 1e-9 {
                let swapped = match la {
                    GammaLabel::Cluster(k) => GammaLabel::Cluster(1 - k),
                    GammaLabel::Boundary => GammaLabel::Boundary,
                };
                prop_assert_eq!(*lb, swapped);
            }
        }
    }

    #[test]
    fn fields_are_bounded_and_translate(pts in common::points(4..=7), tx in -100.0..100.0f64, ty in -100.0..100.0f64, angle in 0.0..1.0f64) {
        let ps = common::set(&pts);
        let br = beta_sweep(&ps).unwrap();
        let w = GridWindow::around(&ps.positions(), 12, 12, 0.1).unwrap();
        let b = beta_map(&ps, &br, &w).unwrap();
        let t = gamma_trajectories(&ps.positions()).unwrap();
        let g = gamma_map(&ps, &t, &br, &w).unwrap();
        prop_assert!(b.in_unit_interval() && g.in_unit_interval());
        let off = Point2::new(tx, ty);
        let moved = ps.map_positions(ps.crs(), |p| p.add(off));
        let wm = GridWindow::new(w.x_min + tx, w.x_max + tx, w.y_min + ty, w.y_max + ty, 12, 12).unwrap();
        prop_assert!((beta_sweep(&moved).unwrap().beta_star - br.beta_star).abs() < 1e-6);
        let bm = beta_map(&moved, &br, &wm).unwrap();
        for (x, y) in b.values.iter().zip(&bm.values) {
            prop_assert!((x - y).abs() < 1e-9);
        }
        // rotation keeps point strengths but not the raster; only the bound is checked
        let rot = ps.map_positions(ps.crs(), |p| rotate(p, angle));
        prop_assert!(twc::fields::point_strengths(&rot).unwrap().iter().zip(twc::fields::point_strengths(&ps).unwrap()).all(|(a, b)| (a - b).abs() < 1e-12));
    }
}
