//! Rasterize the Alpha, Beta, Gamma and Theta fields and write them as ESRI ASCII grids.

use twc::dataset::write_field;
use twc::fields::{activation_histogram, alpha_map, beta_map, gamma_map, gamma_trajectories, nl_mst, theta_map, theta_paths};
use twc::reference::etruscan_points;
use twc::{alpha_sweep, beta_sweep, GridWindow};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ps = etruscan_points();
    let ar = alpha_sweep(&ps)?;
    let br = beta_sweep(&ps)?;
    let window = GridWindow::around(&ps.positions(), 120, 120, 0.1)?;

    let alpha = alpha_map(&ps, &ar, &br, &window)?;
    let beta = beta_map(&ps, &br, &window)?;
    let gamma = gamma_map(&ps, &gamma_trajectories(&ps.positions())?, &br, &window)?;
    let aug = ps.with_point("T.W.C.", ar.alpha_point)?;
    let (set, theta) = theta_paths(&aug.positions(), gamma_trajectories(&aug.positions())?)?;
    let theta = theta_map(&ps, &nl_mst(&theta, &set), &br, &window)?;

    let out = std::env::temp_dir().join("twc-fields");
    std::fs::create_dir_all(&out)?;
    for (name, g) in [("alpha", &alpha), ("beta", &beta), ("gamma", &gamma), ("theta", &theta)] {
        write_field(g, out.join(format!("{name}.asc")))?;
        println!("{name:>5}: max {:.3}, share of cells >= 0.8 max = {:.4}", g.max(), g.high_activation_fraction(0.8));
    }
    println!("alpha activation histogram:");
    for (lo, p) in activation_histogram(&alpha, 5) {
        println!("  [{lo:.1}, {:.1})  {p:.3}", lo + 0.2);
    }
    println!("grids written to {}", out.display());
    Ok(())
}
