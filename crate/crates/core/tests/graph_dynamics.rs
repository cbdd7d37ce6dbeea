mod common;

use proptest::prelude::*;
use twc::dynamics::{dtmc_simulate, g_in_out, transition_matrix, DtmcConfig, TransitionMatrix};
use twc::fields::{gamma_trajectories, theta_paths};
use twc::reference::{etruscan_points, hus_points};
use twc::{alpha_sweep, PointSet};

fn theta_tm(ps: &PointSet) -> TransitionMatrix {
    let aug = ps.with_point("T.W.C.", alpha_sweep(ps).unwrap().alpha_point).unwrap();
    let (_, theta) = theta_paths(&aug.positions(), gamma_trajectories(&aug.positions()).unwrap()).unwrap();
    transition_matrix(&theta, &aug.ids()).unwrap()
}

fn assert_stochastic(tm: &TransitionMatrix) {
    for i in 0..tm.n() {
        let s: f64 = tm.row(i).iter().sum();
        assert!((s - 1.0).abs() < 1e-9, "row {i} sums to {s}");
        assert!(tm.row(i).iter().all(|&p| p >= 0.0));
    }
}

fn random_tm(n: usize, seed: u64) -> TransitionMatrix {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut p = Vec::with_capacity(n * n);
    for _ in 0..n {
        let row: Vec<f64> = (0..n).map(|_| rng.random_range(0.01..1.0)).collect();
        let s: f64 = row.iter().sum();
        p.extend(row.iter().map(|v| v / s));
    }
    TransitionMatrix::new((0..n).map(|k| format!("n{k:02}")).collect(), p).unwrap()
}

#[test]
fn etruscan_and_hus_rows_are_stochastic() {
    assert_stochastic(&theta_tm(&etruscan_points()));
    assert_stochastic(&theta_tm(&hus_points()));
}

#[test]
fn etruscan_veio_prefers_cerveteri() {
    let tm = theta_tm(&etruscan_points());
    let idx = |l: &str| tm.labels.iter().position(|x| x == l).unwrap();
    let veio = idx("Veio");
    let alpha = idx("T.W.C.");
    let best = (0..tm.n()).filter(|&j| j != veio && j != alpha).max_by(|&a, &b| tm.get(veio, a).total_cmp(&tm.get(veio, b))).unwrap();
    assert_eq!(tm.labels[best], "Cerveteri");

    let g = g_in_out(&tm);
    let cerveteri = idx("Cerveteri");
    assert!(g.has_edge(veio, cerveteri) && g.has_edge(cerveteri, veio));
    assert!(!g.has_edge(veio, idx("Populonia")));
    let floor = 1.0 / tm.n() as f64;
    assert!(g.edges.iter().all(|e| e.2 > floor));
}

#[test]
fn argmax_attractors_are_mutual_best_transitions() {
    let tm = theta_tm(&etruscan_points());
    let rep = dtmc_simulate(&tm, &DtmcConfig { argmax: true, ..Default::default() }).unwrap();
    let best = |i: usize| (0..tm.n()).filter(|&j| j != i).max_by(|&a, &b| tm.get(i, a).total_cmp(&tm.get(i, b)).then(b.cmp(&a))).unwrap();
    for b in &rep.basins {
        let (a, c) = b.attractor;
        assert_eq!(best(a), c);
        assert_eq!(best(c), a);
    }
    let covered: usize = rep.basins.iter().map(|b| b.starts.len()).sum();
    assert_eq!(covered, tm.n());
}

#[test]
fn chain_csv_is_reproducible() {
    let tm = theta_tm(&hus_points());
    let cfg = DtmcConfig { runs: 3000, seed: 42, ..Default::default() };
    let a = dtmc_simulate(&tm, &cfg).unwrap().to_csv();
    let b = dtmc_simulate(&tm, &cfg).unwrap().to_csv();
    assert_eq!(a, b);
    assert!(a.starts_with("start,chain,attractor,frequency\n"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn relabeling_permutes_the_report(n in 2usize..8, seed in any::<u64>(), sim_seed in any::<u64>(), argmax in any::<bool>(), shuffle in any::<u64>()) {
        use rand::{seq::SliceRandom, SeedableRng};
        let tm = random_tm(n, seed);
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(shuffle));
        let cfg = DtmcConfig { runs: 400, seed: sim_seed, argmax, ..Default::default() };
        let a = dtmc_simulate(&tm, &cfg).unwrap();
        let b = dtmc_simulate(&tm.permuted(&order), &cfg).unwrap();
        let name = |r: &twc::dynamics::ChainReport, k: usize| r.labels[k].clone();
        for sa in &a.starts {
            let start = name(&a, sa.start);
            let sb = b.starts.iter().find(|s| name(&b, s.start) == start).unwrap();
            let ca: Vec<String> = sa.chain.iter().map(|&k| name(&a, k)).collect();
            let cb: Vec<String> = sb.chain.iter().map(|&k| name(&b, k)).collect();
            prop_assert_eq!(ca, cb);
            prop_assert_eq!(sa.frequency, sb.frequency);
        }
        let basins = |r: &twc::dynamics::ChainReport| {
            let mut v: Vec<_> = r.basins.iter().map(|x| (r.attractor_labels(x.attractor), x.starts.len())).collect();
            v.sort();
            v
        };
        prop_assert_eq!(basins(&a), basins(&b));
    }

    #[test]
    fn transition_rows_stochastic_for_random_sets(pts in common::points(3..=8)) {
        let ps = common::set(&pts);
        let (_, theta) = theta_paths(&pts, gamma_trajectories(&pts).unwrap()).unwrap();
        let tm = transition_matrix(&theta, &ps.ids()).unwrap();
        for i in 0..tm.n() {
            prop_assert!((tm.row(i).iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
    }
}
