use rayon::prelude::*;
use serde::Serialize;

use super::Projection;
use crate::dataset::{DistanceMatrix, FieldKind, GridWindow, ScalarFieldGrid};
use crate::geometry::{centroid, Point2};
use crate::loo::single_linkage_by;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VanishingCluster {
    pub centroid: Point2,
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VanishingPoints {
    pub clusters: Vec<VanishingCluster>,
    /// Cluster index per point.
    pub labels: Vec<usize>,
    /// memberships[i][k]: strength of point i's membership in cluster k.
    pub memberships: Vec<Vec<f64>>,
    pub warnings: Vec<String>,
}

impl VanishingPoints {
    /// Membership of each point in its own cluster.
    pub fn own_membership(&self) -> Vec<f64> {
        self.labels.iter().enumerate().map(|(i, &k)| self.memberships[i][k]).collect()
    }
}

/// Clusters are connected components of {(i,j): m_ij < 0.5·max m}; their projected
/// centroids are the vanishing points. Memberships use distances from the source points.
pub fn vanishing_points(proj: &Projection, m_final: &DistanceMatrix) -> VanishingPoints {
    let n = m_final.n();
    let mut warnings = Vec::new();
    let hi = m_final.off_diagonal().fold(f64::NEG_INFINITY, f64::max);
    let lo = m_final.off_diagonal().fold(f64::INFINITY, f64::min);
    let groups = if hi - lo <= 1e-12 * hi.abs().max(f64::MIN_POSITIVE) {
        warnings.push("meta-distance matrix is constant: a single cluster".to_string());
        vec![(0..n).collect()]
    } else {
        let cut = 0.5 * hi;
        let mut g = single_linkage_by(n, |i, j| m_final.get(i, j) < cut || m_final.get(j, i) < cut);
        g.sort_by_key(|c| c[0]);
        g
    };
    if groups.len() == 1 && warnings.is_empty() {
        warnings.push("all points fall in a single cluster".to_string());
    }
    if groups.len() > 4 {
        warnings.push(format!("{} clusters found", groups.len()));
    }
    let mut labels = vec![0; n];
    let clusters: Vec<VanishingCluster> = groups
        .into_iter()
        .enumerate()
        .map(|(k, members)| {
            members.iter().for_each(|&i| labels[i] = k);
            let c = centroid(&members.iter().map(|&i| proj.projected[i]).collect::<Vec<_>>());
            VanishingCluster { centroid: c, members }
        })
        .collect();
    let g = clusters.len();
    let memberships = proj
        .source
        .points()
        .iter()
        .map(|p| {
            if g == 1 {
                return vec![1.0];
            }
            let d: Vec<f64> = clusters.iter().map(|c| p.pos.dist(c.centroid)).collect();
            let total: f64 = d.iter().sum();
            if total > 0.0 {
                d.iter().map(|di| 1.0 - di / total).collect()
            } else {
                vec![1.0 / g as f64; g]
            }
        })
        .collect();
    VanishingPoints { clusters, labels, memberships, warnings }
}

/// A(g) = exp(−Σ_k (1 − Md_k/ΣMd)·‖Pp_k − g‖ / MaxD), where Md_k is the displacement
/// of point k under projection and MaxD the largest source distance.
pub fn metacluster_field(proj: &Projection, window: &GridWindow) -> ScalarFieldGrid {
    let md = proj.displacements();
    let n = md.len();
    let total: f64 = md.iter().sum();
    let max_d = DistanceMatrix::euclidean(&proj.source.positions()).max_d();
    let weights: Vec<f64> = if total > 1e-12 * max_d {
        md.iter().map(|m| 1.0 - m / total).collect()
    } else {
        vec![1.0 - 1.0 / n as f64; n]
    };
    let cols = window.cols;
    let values: Vec<f64> = (0..window.len())
        .into_par_iter()
        .map(|k| {
            let g = window.cell_center(k / cols, k % cols);
            let dw: f64 = proj.projected.iter().zip(&weights).map(|(p, w)| w * p.dist(g) / max_d).sum();
            (-dw).exp()
        })
        .collect();
    ScalarFieldGrid { window: *window, values, kind: FieldKind::Metacluster }
}
