//! Nonlinear minimum spanning tree over the towns plus the Alpha node.

use twc::fields::{gamma_clusters, gamma_trajectories, nl_mst, theta_paths};
use twc::reference::etruscan_points;
use twc::alpha_sweep;

fn main() -> twc::Result<()> {
    let ps = etruscan_points();
    let trajs = gamma_trajectories(&ps.positions())?;
    let clusters = gamma_clusters(&trajs, 0.02);
    for (p, (bend, label)) in ps.points().iter().zip(clusters.bends.iter().zip(&clusters.labels)) {
        println!("{:<10} bend {:>8.4}  {:?}", p.id, bend, label);
    }

    let aug = ps.with_point("T.W.C.", alpha_sweep(&ps)?.alpha_point)?;
    let (set, theta) = theta_paths(&aug.positions(), gamma_trajectories(&aug.positions())?)?;
    let mst = nl_mst(&theta, &set);
    let ids = aug.ids();
    println!("\ntree weight {:.2}", mst.total_weight);
    for e in &mst.edges {
        println!("{:<10} - {:<10} {:>7.2}", ids[e.a], ids[e.b], e.weight);
    }
    Ok(())
}
