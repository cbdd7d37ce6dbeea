//! Beta sweep: how far the symmetric weighted centroid drifts from the center of mass.

use twc::reference::etruscan_points;
use twc::{beta_sweep, beta_sweep_with, SelfTerm, SweepConfig};

fn main() -> twc::Result<()> {
    let ps = etruscan_points();
    let br = beta_sweep(&ps)?;
    println!("beta* = {:.4}, bracketed = {}", br.beta_star, br.bracketed);
    for s in br.trace.steps.iter().step_by(20).take(10) {
        println!("beta {:>5.2}  drift {:>8.4}", s.param, s.dist_from_mass_center);
    }

    // the mean-indirect self term keeps rising over the whole scan
    let alt = beta_sweep_with(&ps, &SweepConfig { unbracketed: twc::Unbracketed::Boundary, ..Default::default() }, SelfTerm::MeanIndirect)?;
    println!("mean-indirect self term: beta* = {:.2}, bracketed = {}", alt.beta_star, alt.bracketed);
    Ok(())
}
