//! Locate the Alpha Point of the Etruscan towns and print the free-energy curve.

use twc::reference::etruscan_points;
use twc::{alpha_sweep, indirect_geometry, euclidean_matrix};

fn main() -> twc::Result<()> {
    let ps = etruscan_points();
    let g = indirect_geometry(&euclidean_matrix(&ps))?;
    println!("max distance {:.2}, largest row imbalance {:.2e}", g.d_max, (0..g.n()).map(|i| g.row_sum(i).abs()).fold(0.0, f64::max));

    let ar = alpha_sweep(&ps)?;
    println!("alpha* = {:.3}  alpha point = ({:.2}, {:.2})", ar.alpha_star, ar.alpha_point.x, ar.alpha_point.y);
    println!("{:>8} {:>9} {:>10}", "alpha", "entropy", "free en.");
    for s in ar.trace.steps.iter().step_by(200).take(12) {
        println!("{:>8.2} {:>9.4} {:>10.4}", s.param, s.entropy, s.free_energy);
    }
    let tail = ar.alpha_vector.last().expect("non-empty");
    println!("alpha vector: {} samples ending at ({:.2}, {:.2})", ar.alpha_vector.len(), tail.x, tail.y);
    Ok(())
}
