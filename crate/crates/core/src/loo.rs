//! Leave-one-out multi-outbreak protocol.

use rayon::prelude::*;
use serde::Serialize;

use crate::dataset::{euclidean_matrix, PointSet};
use crate::error::{Result, TwcError};
use crate::geometry::{centroid, Point2};
use crate::sweep::{alpha_sweep_with, SweepConfig};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LooFold {
    pub excluded_id: String,
    pub alpha_point: Point2,
    pub alpha_star: f64,
    pub bracketed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutbreakCandidate {
    pub centroid: Point2,
    /// Fraction of folds in this cluster.
    pub share: f64,
    /// Fold indices (= index of the excluded point).
    pub folds: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LooReport {
    pub folds: Vec<LooFold>,
    /// Largest share first.
    pub candidates: Vec<OutbreakCandidate>,
    pub cutoff: f64,
}

pub fn loo_alpha(ps: &PointSet) -> Result<LooReport> {
    loo_alpha_with(ps, &SweepConfig::default())
}

/// One alpha sweep per left-out point, then single-linkage clustering of the
/// fold alpha points at 0.1 of the largest pairwise distance.
pub fn loo_alpha_with(ps: &PointSet, cfg: &SweepConfig) -> Result<LooReport> {
    if ps.len() < 4 {
        return Err(TwcError::DatasetTooSmall { n: ps.len(), min: 4 });
    }
    let folds = (0..ps.len())
        .into_par_iter()
        .map(|k| {
            let sub = ps.without(k)?;
            let ar = alpha_sweep_with(&sub, cfg)?;
            Ok(LooFold {
                excluded_id: ps.points()[k].id.clone(),
                alpha_point: ar.alpha_point,
                alpha_star: ar.alpha_star,
                bracketed: ar.bracketed,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let cutoff = 0.1 * euclidean_matrix(ps).max_d();
    let pts: Vec<Point2> = folds.iter().map(|f| f.alpha_point).collect();
    let candidates = single_linkage(&pts, cutoff)
        .into_iter()
        .map(|members| OutbreakCandidate {
            centroid: centroid(&members.iter().map(|&k| pts[k]).collect::<Vec<_>>()),
            share: members.len() as f64 / pts.len() as f64,
            folds: members,
        })
        .collect();
    Ok(LooReport { folds, candidates, cutoff })
}

/// Connected components of the graph joining points within `cutoff`,
/// largest first, ties by smallest member.
pub fn single_linkage(pts: &[Point2], cutoff: f64) -> Vec<Vec<usize>> {
    single_linkage_by(pts.len(), |i, j| pts[i].dist(pts[j]) <= cutoff)
}

/// Connected components of the graph with an edge wherever `linked(i, j)`, i < j.
pub fn single_linkage_by(n: usize, linked: impl Fn(usize, usize) -> bool) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for i in 0..n {
        for j in i + 1..n {
            if linked(i, j) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(i);
    }
    groups.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
    groups
}
