//! Gamma trajectories: the centroid path from the center of mass to each point
//! as the point's own distance kernel sharpens.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::DistanceMatrix;
use crate::error::{Result, TwcError};
use crate::geometry::{centroid, signed_area_to_chord, Point2};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaConfig {
    /// Fixed γ increment; `None` picks it adaptively with [`gamma_step`].
    pub step: Option<f64>,
    /// Convergence radius as a fraction of the largest distance.
    pub delta: f64,
    pub t_max: usize,
    /// |bend| below this marks a boundary trajectory.
    pub bend_tol: f64,
}

impl Default for GammaConfig {
    fn default() -> Self {
        Self { step: None, delta: 1e-3, t_max: 10_000, bend_tol: 0.02 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GammaTrajectory {
    pub point_index: usize,
    /// samples[0] is the center of mass.
    pub samples: Vec<Point2>,
    pub converged: bool,
}

impl GammaTrajectory {
    /// Number of samples (Q).
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// Centroid of `pts` weighted by exp(−γ·d_ij/D) for target i.
fn centroid_toward(pts: &[Point2], dist: &DistanceMatrix, d: f64, i: usize, gamma: f64) -> Point2 {
    let (mut x, mut y, mut s) = (0.0, 0.0, 0.0);
    for (j, p) in pts.iter().enumerate() {
        let w = (-gamma * dist.get(i, j) / d).exp();
        x += w * p.x;
        y += w * p.y;
        s += w;
    }
    Point2::new(x / s, y / s)
}

/// Largest γ increment, halving from 1, whose first step moves no centroid more than 1% of D.
pub fn gamma_step(pts: &[Point2]) -> Result<f64> {
    let dist = DistanceMatrix::euclidean(pts);
    let d = dist.max_d();
    if d <= 0.0 {
        return Err(TwcError::DegenerateDataset("all points coincide".into()));
    }
    let cm = centroid(pts);
    let mut eps = 1.0;
    while eps > 1e-9 {
        if (0..pts.len()).all(|i| centroid_toward(pts, &dist, d, i, eps).dist(cm) <= 0.01 * d) {
            return Ok(eps);
        }
        eps *= 0.5;
    }
    Ok(eps)
}

pub fn gamma_trajectories(pts: &[Point2]) -> Result<Vec<GammaTrajectory>> {
    gamma_trajectories_with(pts, &GammaConfig::default())
}

/// One trajectory per point, each run until it is within δ·D of its target or t_max samples.
pub fn gamma_trajectories_with(pts: &[Point2], cfg: &GammaConfig) -> Result<Vec<GammaTrajectory>> {
    let dist = DistanceMatrix::euclidean(pts);
    let d = dist.max_d();
    if d <= 0.0 {
        return Err(TwcError::DegenerateDataset("all points coincide".into()));
    }
    let eps = match cfg.step {
        Some(e) if e > 0.0 => e,
        Some(e) => return Err(TwcError::Invalid(format!("gamma step must be positive, got {e}"))),
        None => gamma_step(pts)?,
    };
    let radius = cfg.delta * d;
    Ok((0..pts.len())
        .into_par_iter()
        .map(|i| {
            // weights advance multiplicatively: w_j(γ + ε) = w_j(γ)·exp(−ε d_ij / D)
            let factor: Vec<f64> = (0..pts.len()).map(|j| (-eps * dist.get(i, j) / d).exp()).collect();
            let mut w = vec![1.0; pts.len()];
            let mut samples = Vec::new();
            loop {
                let (mut x, mut y, mut s) = (0.0, 0.0, 0.0);
                for (p, wj) in pts.iter().zip(&w) {
                    x += wj * p.x;
                    y += wj * p.y;
                    s += wj;
                }
                let c = Point2::new(x / s, y / s);
                samples.push(c);
                if c.dist(pts[i]) < radius {
                    return GammaTrajectory { point_index: i, samples, converged: true };
                }
                if samples.len() >= cfg.t_max {
                    return GammaTrajectory { point_index: i, samples, converged: false };
                }
                w.iter_mut().zip(&factor).for_each(|(a, f)| *a *= f);
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GammaLabel {
    /// 0 for positive bend, 1 for negative.
    Cluster(usize),
    Boundary,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GammaClusters {
    /// Signed area between trajectory and chord over chord length squared.
    pub bends: Vec<f64>,
    pub labels: Vec<GammaLabel>,
    pub warning: Option<String>,
}

/// Partition trajectories by the sign of their bend.
pub fn gamma_clusters(trajs: &[GammaTrajectory], bend_tol: f64) -> GammaClusters {
    let bends: Vec<f64> = trajs
        .iter()
        .map(|t| {
            let chord = t.samples[t.samples.len() - 1].sub(t.samples[0]);
            let c2 = chord.x * chord.x + chord.y * chord.y;
            if c2 > 0.0 {
                signed_area_to_chord(&t.samples) / c2
            } else {
                0.0
            }
        })
        .collect();
    let labels: Vec<GammaLabel> = bends
        .iter()
        .map(|&b| match b {
            b if b.abs() < bend_tol => GammaLabel::Boundary,
            b if b > 0.0 => GammaLabel::Cluster(0),
            _ => GammaLabel::Cluster(1),
        })
        .collect();
    let warning = labels
        .iter()
        .all(|l| *l == GammaLabel::Boundary)
        .then(|| "every trajectory is straight: no curvature clusters".to_string());
    GammaClusters { bends, labels, warning }
}
