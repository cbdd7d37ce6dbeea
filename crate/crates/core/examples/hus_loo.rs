//! Outbreak estimate for the 2011 HUS cities with a leave-one-out check.

use twc::geometry::haversine_km;
use twc::reference::{hus_points, HANOVER};
use twc::{alpha_sweep, loo_alpha};

fn main() -> twc::Result<()> {
    let ps = hus_points();
    let ar = alpha_sweep(&ps)?;
    let p = ar.alpha_point;
    println!("alpha point lon {:.3} lat {:.3}, {:.1} km from Hanover", p.x, p.y, haversine_km(p.y, p.x, HANOVER.1, HANOVER.0));

    let rep = loo_alpha(&ps)?;
    for f in &rep.folds {
        println!("without {:<12} -> ({:.3}, {:.3})", f.excluded_id, f.alpha_point.x, f.alpha_point.y);
    }
    for c in &rep.candidates {
        println!("candidate ({:.3}, {:.3}) supported by {:.1}% of folds", c.centroid.x, c.centroid.y, 100.0 * c.share);
    }
    Ok(())
}
