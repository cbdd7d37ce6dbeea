//! Meta-distance recursion from a raw distance matrix down to vanishing points.

use twc::metadistance::{meta_distance, mds_project, vanishing_points};
use twc::reference::{etruscan_matrix, etruscan_points};

fn main() -> twc::Result<()> {
    let (labels, d) = etruscan_matrix();
    let trace = meta_distance(&d)?;
    println!("converged after {} iterations, optimum at {}", trace.converged_at, trace.optimal_at);
    for it in trace.iterations.iter().step_by(25) {
        println!("t {:>4}  S {:>10.4}  J {:>8.3}", it.t, it.s, it.j);
    }

    let t = trace.optimal_at;
    let proj = mds_project(&trace.rescaled_at(t), &etruscan_points())?;
    let vp = vanishing_points(&proj, &trace.matrix_at(t));
    for (k, c) in vp.clusters.iter().enumerate() {
        let names: Vec<&str> = c.members.iter().map(|&i| labels[i].as_str()).collect();
        println!("vanishing point {k} at ({:.1}, {:.1}): {}", c.centroid.x, c.centroid.y, names.join(", "));
    }
    for (name, mu) in labels.iter().zip(vp.own_membership()) {
        println!("{name:<10} {mu:.3}");
    }
    Ok(())
}
