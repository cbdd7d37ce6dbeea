//! Indirect distance: the mean distance from i to every point other than i and j.

use crate::dataset::{DistanceMatrix, MatrixKind};
use crate::error::{Result, TwcError};

#[derive(Debug, Clone, PartialEq)]
pub struct IndirectGeometry {
    /// d̄, asymmetric in general; diagonal holds the mean distance to all others.
    pub dbar: DistanceMatrix,
    /// d − d̄ off the diagonal, zero on it.
    pub delta: Vec<f64>,
    /// Largest d̄ entry.
    pub d_max: f64,
}

pub fn indirect_geometry(d: &DistanceMatrix) -> Result<IndirectGeometry> {
    let n = d.n();
    if n < 3 {
        return Err(TwcError::DatasetTooSmall { n, min: 3 });
    }
    let sums: Vec<f64> = (0..n).map(|i| d.row(i).iter().sum::<f64>() - d.get(i, i)).collect();
    let dbar = DistanceMatrix::from_fn(n, MatrixKind::Indirect, |i, j| {
        if i == j {
            sums[i] / (n - 1) as f64
        } else {
            // rounding can push (S - d) a hair below zero when one distance dominates
            ((sums[i] - d.get(i, j)) / (n - 2) as f64).max(0.0)
        }
    })?;
    let delta = (0..n * n)
        .map(|k| {
            let (i, j) = (k / n, k % n);
            if i == j {
                0.0
            } else {
                d.get(i, j) - dbar.get(i, j)
            }
        })
        .collect();
    let d_max = dbar.max_d();
    Ok(IndirectGeometry { dbar, delta, d_max })
}

impl IndirectGeometry {
    pub fn n(&self) -> usize {
        self.dbar.n()
    }

    pub fn delta(&self, i: usize, j: usize) -> f64 {
        self.delta[i * self.n() + j]
    }

    /// Σ_j Δd_ij.
    pub fn row_sum(&self, i: usize) -> f64 {
        let n = self.n();
        self.delta[i * n..(i + 1) * n].iter().sum()
    }

    /// Σ_i Σ_j Δd_ij.
    pub fn grand_sum(&self) -> f64 {
        self.delta.iter().sum()
    }

    /// Σ_i Σ_j |Δd_ij|.
    pub fn abs_sum(&self) -> f64 {
        self.delta.iter().map(|v| v.abs()).sum()
    }

    /// Euclidean distance recovered from d̄ + Δd.
    pub fn direct(&self, i: usize, j: usize) -> f64 {
        if i == j {
            0.0
        } else {
            self.dbar.get(i, j) + self.delta(i, j)
        }
    }
}

/// Outcome of repeatedly applying the indirect-distance map.
#[derive(Debug, Clone, PartialEq)]
pub struct CollapseReport {
    /// Depth at which the off-diagonal spread fell below 1e-9 of the initial spread.
    pub depth: Option<usize>,
    /// Spread (max − min off-diagonal entry) at depth 0 (direct distances), 1, 2, ...
    pub spreads: Vec<f64>,
}

impl CollapseReport {
    pub fn collapsed(&self) -> bool {
        self.depth.is_some()
    }
}

/// Iterate the indirect-distance map on its own output, symmetrizing each level,
/// until every off-diagonal entry agrees.
pub fn recursive_collapse(g: &IndirectGeometry, max_depth: usize) -> CollapseReport {
    let n = g.n();
    let spread = |m: &[f64]| {
        let (lo, hi) = (0..n * n)
            .filter(|k| k / n != k % n)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), k| (lo.min(m[k]), hi.max(m[k])));
        hi - lo
    };
    let direct: Vec<f64> = (0..n * n).map(|k| g.direct(k / n, k % n)).collect();
    let initial = spread(&direct);
    let threshold = 1e-9 * initial;
    let mut spreads = vec![initial];
    let mut level: Vec<f64> = g.dbar.values().to_vec();
    for depth in 1..=max_depth {
        if depth > 1 {
            level = indirect_step(&level, n);
        }
        symmetrize(&mut level, n);
        let s = spread(&level);
        spreads.push(s);
        if s <= threshold {
            return CollapseReport { depth: Some(depth), spreads };
        }
    }
    CollapseReport { depth: None, spreads }
}

fn indirect_step(m: &[f64], n: usize) -> Vec<f64> {
    let sums: Vec<f64> = (0..n).map(|i| (0..n).filter(|&k| k != i).map(|k| m[i * n + k]).sum()).collect();
    (0..n * n)
        .map(|k| {
            let (i, j) = (k / n, k % n);
            if i == j {
                sums[i] / (n - 1) as f64
            } else {
                (sums[i] - m[k]) / (n - 2) as f64
            }
        })
        .collect()
}

fn symmetrize(m: &mut [f64], n: usize) {
    for i in 0..n {
        for j in i + 1..n {
            let v = 0.5 * (m[i * n + j] + m[j * n + i]);
            m[i * n + j] = v;
            m[j * n + i] = v;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point2;

    fn triangle() -> DistanceMatrix {
        let h = 3f64.sqrt() / 2.0;
        DistanceMatrix::euclidean(&[Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(0.5, h)])
    }

    #[test]
    fn equilateral_indirect_is_one() {
        let g = indirect_geometry(&triangle()).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!((g.dbar.get(i, j) - 1.0).abs() < 1e-12);
            }
        }
        assert_eq!(recursive_collapse(&g, 10).depth, Some(1));
    }

    #[test]
    fn rows_conserve() {
        let pts: Vec<Point2> = (0..7).map(|k| Point2::new((k * k) as f64 % 5.0, (3 * k) as f64 % 7.0)).collect();
        let g = indirect_geometry(&DistanceMatrix::euclidean(&pts)).unwrap();
        for i in 0..7 {
            assert!(g.row_sum(i).abs() < 1e-9 * 7.0 * g.d_max);
        }
    }

    #[test]
    fn too_small() {
        let d = DistanceMatrix::euclidean(&[Point2::new(0.0, 0.0), Point2::new(1.0, 0.0)]);
        assert!(matches!(indirect_geometry(&d), Err(TwcError::DatasetTooSmall { n: 2, .. })));
    }
}
