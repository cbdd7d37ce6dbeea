//! Meta-distance: the distance matrix of distance-matrix rows, rescaled to [0,1]
//! and iterated to a near two-valued fixed point, plus its planar projection,
//! vanishing points and the meta-cluster field.

mod mds;
mod vanishing;

pub use mds::{classical_mds, mds_project, procrustes, stress, Embedding, Projection, RigidTransform};
pub use vanishing::{metacluster_field, vanishing_points, VanishingCluster, VanishingPoints};

use serde::{Deserialize, Serialize};

use crate::dataset::{DistanceMatrix, MatrixKind};
use crate::error::{Result, TwcError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scaling {
    /// Min and max over off-diagonal entries.
    #[default]
    OffDiagonal,
    /// Min and max over every entry (the zero diagonal pins the min).
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetaConfig {
    /// Stop once max |m^{t} − m^{t−1}| falls below this.
    pub epsilon: f64,
    pub max_iterations: usize,
    pub scaling: Scaling,
}

impl Default for MetaConfig {
    fn default() -> Self {
        Self { epsilon: 1e-8, max_iterations: 10_000, scaling: Scaling::OffDiagonal }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetaIteration {
    pub t: usize,
    /// Scaled matrix, row-major, entries in [0,1].
    pub m: Vec<f64>,
    /// Sum of the entries above the diagonal.
    pub s: f64,
    /// S^{t} − S^{t−1}; zero at t = 0.
    pub delta_s: f64,
    /// log(S/|ΔS|)·sign(ΔS); NaN where undefined.
    pub j: f64,
    /// max |m^{t} − m^{t−1}|; NaN at t = 0.
    pub delta_m: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetaDistanceTrace {
    pub n: usize,
    /// t = 0 is the rescaled input.
    pub iterations: Vec<MetaIteration>,
    pub converged: bool,
    /// Number of iterations performed (T).
    pub converged_at: usize,
    /// Iteration maximizing J (t*).
    pub optimal_at: usize,
    /// Largest and smallest entry of the input, used to map [0,1] back to input units.
    pub scale: f64,
    pub offset: f64,
}

impl MetaDistanceTrace {
    pub fn final_matrix(&self) -> DistanceMatrix {
        self.matrix_at(self.iterations.len() - 1)
    }

    pub fn matrix_at(&self, t: usize) -> DistanceMatrix {
        DistanceMatrix::new(self.n, self.iterations[t].m.clone(), MatrixKind::Meta).expect("entries are in [0,1]")
    }

    /// Matrix at `t` mapped back to the input's maximum (display units).
    pub fn rescaled_at(&self, t: usize) -> DistanceMatrix {
        let m = self.iterations[t].m.iter().map(|v| v * self.scale).collect();
        DistanceMatrix::new(self.n, m, MatrixKind::Meta).expect("entries are nonnegative")
    }
}

fn rescale(d: &[f64], n: usize, scaling: Scaling) -> Vec<f64> {
    let considered = |k: &usize| scaling == Scaling::Full || k / n != k % n;
    let (lo, hi) = (0..n * n)
        .filter(considered)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), k| (lo.min(d[k]), hi.max(d[k])));
    (0..n * n)
        .map(|k| {
            if k / n == k % n {
                0.0
            } else if hi > lo {
                ((d[k] - lo) / (hi - lo)).clamp(0.0, 1.0)
            } else {
                1.0
            }
        })
        .collect()
}

/// The matrices are symmetric with zero diagonal, so this is half the full sum.
fn upper_sum(m: &[f64]) -> f64 {
    0.5 * m.iter().sum::<f64>()
}

/// Euclidean distances between the rows of `m`.
fn row_distances(m: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let d = (0..n).map(|k| (m[i * n + k] - m[j * n + k]).powi(2)).sum::<f64>().sqrt();
            out[i * n + j] = d;
            out[j * n + i] = d;
        }
    }
    out
}

/// Run the recursion to convergence or the iteration cap, whichever comes first.
pub fn meta_distance_trace(d: &DistanceMatrix, cfg: &MetaConfig) -> Result<MetaDistanceTrace> {
    let n = d.n();
    if n < 3 {
        return Err(TwcError::DatasetTooSmall { n, min: 3 });
    }
    if d.max_d() <= 0.0 {
        return Err(TwcError::DegenerateDataset("all distances are zero".into()));
    }
    let offset = d.off_diagonal().fold(f64::INFINITY, f64::min);
    let m0 = rescale(d.values(), n, cfg.scaling);
    let s0 = upper_sum(&m0);
    let mut iterations =
        vec![MetaIteration { t: 0, m: m0, s: s0, delta_s: 0.0, j: f64::NAN, delta_m: f64::NAN }];
    let mut converged = false;
    for t in 1..=cfg.max_iterations {
        let prev = &iterations[t - 1];
        let m = rescale(&row_distances(&prev.m, n), n, cfg.scaling);
        let s = upper_sum(&m);
        let delta_s = s - prev.s;
        let delta_m = m.iter().zip(&prev.m).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        let j = if delta_s != 0.0 { (s / delta_s.abs()).ln() * delta_s.signum() } else { f64::NAN };
        iterations.push(MetaIteration { t, m, s, delta_s, j, delta_m });
        if delta_m < cfg.epsilon {
            converged = true;
            break;
        }
    }
    let converged_at = iterations.len() - 1;
    let mut trace =
        MetaDistanceTrace { n, iterations, converged, converged_at, optimal_at: converged_at, scale: d.max_d(), offset };
    trace.optimal_at = optimal_matrix(&mut trace).0;
    Ok(trace)
}

/// [`meta_distance_trace`] with default settings, failing when the cap is hit.
pub fn meta_distance(d: &DistanceMatrix) -> Result<MetaDistanceTrace> {
    let cfg = MetaConfig::default();
    let trace = meta_distance_trace(d, &cfg)?;
    if !trace.converged {
        return Err(TwcError::NotConverged { iterations: cfg.max_iterations });
    }
    Ok(trace)
}

/// t* = argmax J over t ≥ 1. A zero ΔS counts only at the terminal iteration,
/// where it is assigned one more than the largest finite J.
pub fn optimal_matrix(trace: &mut MetaDistanceTrace) -> (usize, DistanceMatrix) {
    let last = trace.iterations.len() - 1;
    let best_finite = trace.iterations[1..].iter().map(|it| it.j).filter(|j| j.is_finite()).fold(f64::NEG_INFINITY, f64::max);
    if last >= 1 && trace.iterations[last].delta_s == 0.0 {
        trace.iterations[last].j = if best_finite.is_finite() { best_finite + 1.0 } else { 1.0 };
    }
    let mut t_star = last;
    let mut best = f64::NEG_INFINITY;
    for it in trace.iterations.iter().skip(1) {
        if it.j.is_finite() && it.j > best {
            best = it.j;
            t_star = it.t;
        }
    }
    trace.optimal_at = t_star;
    (t_star, trace.matrix_at(t_star))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point2;

    #[test]
    fn constant_matrix_is_a_fixed_point() {
        let h = 3f64.sqrt() / 2.0;
        let d = DistanceMatrix::euclidean(&[Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(0.5, h)]);
        let tr = meta_distance(&d).unwrap();
        assert!(tr.converged_at <= 2);
        assert!(tr.final_matrix().off_diagonal().all(|v| v == 1.0));
    }

    #[test]
    fn rescale_uses_off_diagonal_range() {
        let m = rescale(&[0.0, 2.0, 4.0, 2.0, 0.0, 3.0, 4.0, 3.0, 0.0], 3, Scaling::OffDiagonal);
        assert_eq!(m, vec![0.0, 0.0, 1.0, 0.0, 0.0, 0.5, 1.0, 0.5, 0.0]);
        let m = rescale(&[0.0, 2.0, 4.0, 2.0, 0.0, 3.0, 4.0, 3.0, 0.0], 3, Scaling::Full);
        assert_eq!(m[1], 0.5);
    }
}
