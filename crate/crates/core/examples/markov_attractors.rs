//! Transition matrix, G IN-OUT graph and 2-cycle attractors of simulated chains.

use twc::dynamics::{dtmc_simulate, g_in_out, transition_matrix, DtmcConfig};
use twc::fields::{gamma_trajectories, theta_paths};
use twc::reference::etruscan_points;
use twc::alpha_sweep;

fn main() -> twc::Result<()> {
    let ps = etruscan_points();
    let aug = ps.with_point("T.W.C.", alpha_sweep(&ps)?.alpha_point)?;
    let (_, theta) = theta_paths(&aug.positions(), gamma_trajectories(&aug.positions())?)?;
    let tm = transition_matrix(&theta, &aug.ids())?;
    println!("{}", g_in_out(&tm).to_dot());

    for argmax in [true, false] {
        let rep = dtmc_simulate(&tm, &DtmcConfig { argmax, runs: 2000, ..Default::default() })?;
        println!("{} chains:", if argmax { "argmax" } else { "sampled" });
        for b in &rep.basins {
            let (a, c) = rep.attractor_labels(b.attractor);
            println!("  {a} <-> {c}: {} starts ({:.1}%)", b.starts.len(), 100.0 * b.share);
        }
    }
    Ok(())
}
