//! Scalar fields over a raster window. Every field is a normalized superposition
//! of exp(−β*·distance/D) kernels around a set of generating samples.

mod gamma;
mod theta;

pub use gamma::{gamma_clusters, gamma_step, gamma_trajectories, gamma_trajectories_with, GammaClusters, GammaConfig, GammaLabel, GammaTrajectory};
pub use theta::{minimum_spanning_tree, nl_mst, theta_paths, MstEdge, NlMst, ThetaPath, ThetaSet};

use rayon::prelude::*;

use crate::dataset::{euclidean_matrix, FieldKind, GridWindow, PointSet, ScalarFieldGrid};
use crate::error::{Result, TwcError};
use crate::geometry::Point2;
use crate::sweep::{AlphaResult, BetaResult};

/// value(cell) = Σ_s w_s·exp(−β·‖cell − s‖/D) / norm, summed in sample order.
pub fn superpose(
    window: &GridWindow,
    samples: &[Point2],
    weights: Option<&[f64]>,
    norm: f64,
    d: f64,
    beta: f64,
    kind: FieldKind,
) -> ScalarFieldGrid {
    let k = beta / d;
    let cols = window.cols;
    let values = (0..window.rows)
        .into_par_iter()
        .flat_map_iter(|r| {
            (0..cols).map(move |c| {
                let g = window.cell_center(r, c);
                let s: f64 = match weights {
                    Some(w) => samples.iter().zip(w).map(|(p, wi)| wi * (-k * p.dist(g)).exp()).sum(),
                    None => samples.iter().map(|p| (-k * p.dist(g)).exp()).sum(),
                };
                (s / norm).min(1.0)
            })
        })
        .collect();
    ScalarFieldGrid { window: *window, values, kind }
}

fn kernel_scale(ps: &PointSet) -> Result<f64> {
    let d = euclidean_matrix(ps).max_d();
    if d > 0.0 {
        Ok(d)
    } else {
        Err(TwcError::DegenerateDataset("all points coincide".into()))
    }
}

/// Mean kernel over the Alpha Vector.
pub fn alpha_map(ps: &PointSet, ar: &AlphaResult, br: &BetaResult, window: &GridWindow) -> Result<ScalarFieldGrid> {
    if ar.alpha_vector.is_empty() {
        return Err(TwcError::EmptyAlphaVector);
    }
    let d = kernel_scale(ps)?;
    let v = ar.alpha_vector.len() as f64;
    Ok(superpose(window, &ar.alpha_vector, None, v, d, br.beta_star, FieldKind::Alpha))
}

/// Per-point strength F_i = 1/(N−1)·Σ_{j≠i} exp(−d_ij/D).
pub fn point_strengths(ps: &PointSet) -> Result<Vec<f64>> {
    let e = euclidean_matrix(ps);
    let d = kernel_scale(ps)?;
    let n = ps.len();
    Ok((0..n)
        .map(|i| (0..n).filter(|&j| j != i).map(|j| (-e.get(i, j) / d).exp()).sum::<f64>() / (n - 1) as f64)
        .collect())
}

/// Strength-weighted kernel over the data points.
pub fn beta_map(ps: &PointSet, br: &BetaResult, window: &GridWindow) -> Result<ScalarFieldGrid> {
    let d = kernel_scale(ps)?;
    let f = point_strengths(ps)?;
    Ok(superpose(window, &ps.positions(), Some(&f), ps.len() as f64, d, br.beta_star, FieldKind::Beta))
}

/// Mean kernel over every gamma trajectory sample.
pub fn gamma_map(ps: &PointSet, trajs: &[GammaTrajectory], br: &BetaResult, window: &GridWindow) -> Result<ScalarFieldGrid> {
    let d = kernel_scale(ps)?;
    let samples: Vec<Point2> = trajs.iter().flat_map(|t| t.samples.iter().copied()).collect();
    if samples.is_empty() {
        return Err(TwcError::Invalid("no trajectory samples".into()));
    }
    Ok(superpose(window, &samples, None, samples.len() as f64, d, br.beta_star, FieldKind::Gamma))
}

/// Mean kernel over the samples of the NL-MST edge paths.
pub fn theta_map(ps: &PointSet, mst: &NlMst, br: &BetaResult, window: &GridWindow) -> Result<ScalarFieldGrid> {
    let d = kernel_scale(ps)?;
    let samples: Vec<Point2> = mst.edges.iter().flat_map(|e| e.path.samples.iter().copied()).collect();
    if samples.is_empty() {
        return Err(TwcError::Invalid("spanning tree has no path samples".into()));
    }
    Ok(superpose(window, &samples, None, samples.len() as f64, d, br.beta_star, FieldKind::Theta))
}

/// Fraction of cells per activation decile; the last bin includes 1.0.
pub fn activation_histogram(grid: &ScalarFieldGrid, bins: usize) -> Vec<(f64, f64)> {
    let mut counts = vec![0usize; bins];
    for v in &grid.values {
        let b = ((v * bins as f64) as usize).min(bins - 1);
        counts[b] += 1;
    }
    let total = grid.values.len() as f64;
    counts.iter().enumerate().map(|(b, c)| (b as f64 / bins as f64, *c as f64 / total)).collect()
}
