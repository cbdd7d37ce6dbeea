//! Classical multidimensional scaling and rigid alignment.

use serde::Serialize;

use crate::dataset::{DistanceMatrix, PointSet};
use crate::error::{Result, TwcError};
use crate::geometry::{centroid, Point2};

/// Planar embedding of a distance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    pub coords: Vec<Point2>,
    /// Top two eigenvalues of the double-centered matrix.
    pub eigenvalues: [f64; 2],
    /// Number of axes with positive eigenvalue (0..=2).
    pub effective_dims: usize,
}

/// B = −½ J (m∘m) J, top two eigenpairs by deflated power iteration.
pub fn classical_mds(m: &DistanceMatrix) -> Embedding {
    let n = m.n();
    let sq: Vec<f64> = m.values().iter().map(|v| v * v).collect();
    let row_mean: Vec<f64> = (0..n).map(|i| sq[i * n..(i + 1) * n].iter().sum::<f64>() / n as f64).collect();
    let col_mean: Vec<f64> = (0..n).map(|j| (0..n).map(|i| sq[i * n + j]).sum::<f64>() / n as f64).collect();
    let all_mean = row_mean.iter().sum::<f64>() / n as f64;
    let mut b: Vec<f64> =
        (0..n * n).map(|k| -0.5 * (sq[k] - row_mean[k / n] - col_mean[k % n] + all_mean)).collect();
    // symmetrize against rounding
    for i in 0..n {
        for j in i + 1..n {
            let v = 0.5 * (b[i * n + j] + b[j * n + i]);
            b[i * n + j] = v;
            b[j * n + i] = v;
        }
    }
    let mut axes = Vec::with_capacity(2);
    let mut eigenvalues = [0.0; 2];
    let mut first = 0.0f64;
    let mut effective_dims = 0;
    for e in eigenvalues.iter_mut() {
        let (lambda, v) = top_eigenpair(&b, n);
        *e = lambda;
        let positive = lambda > 1e-12 * first.max(lambda.abs()).max(f64::MIN_POSITIVE);
        if axes.is_empty() {
            first = lambda.abs();
        }
        if positive {
            effective_dims += 1;
            axes.push(v.iter().map(|x| x * lambda.sqrt()).collect::<Vec<f64>>());
        } else {
            axes.push(vec![0.0; n]);
        }
        for i in 0..n {
            for j in 0..n {
                b[i * n + j] -= lambda * v[i] * v[j];
            }
        }
    }
    let coords = (0..n).map(|i| Point2::new(axes[0][i], axes[1][i])).collect();
    Embedding { coords, eigenvalues, effective_dims }
}

/// Largest algebraic eigenpair of a symmetric matrix. The matrix is shifted by its
/// Gershgorin lower bound when that is negative so power iteration picks the top end.
fn top_eigenpair(b: &[f64], n: usize) -> (f64, Vec<f64>) {
    let shift = (0..n)
        .map(|i| b[i * n + i] - (0..n).filter(|&j| j != i).map(|j| b[i * n + j].abs()).sum::<f64>())
        .fold(f64::INFINITY, f64::min)
        .min(0.0)
        .abs();
    let mut v: Vec<f64> = (0..n).map(|k| ((k + 1) as f64 * 0.618_033_988_749_895).fract() - 0.5).collect();
    normalize(&mut v);
    let mut w = vec![0.0; n];
    for _ in 0..100_000 {
        for i in 0..n {
            w[i] = shift * v[i] + (0..n).map(|j| b[i * n + j] * v[j]).sum::<f64>();
        }
        if normalize(&mut w) == 0.0 {
            return (0.0, v);
        }
        let change = v.iter().zip(&w).map(|(a, c)| (a - c) * (a - c)).sum::<f64>().sqrt();
        std::mem::swap(&mut v, &mut w);
        if change < 1e-12 {
            break;
        }
    }
    let lambda: f64 = (0..n).map(|i| v[i] * (0..n).map(|j| b[i * n + j] * v[j]).sum::<f64>()).sum();
    // sign convention: largest-magnitude component positive
    let big = (0..n).fold(0, |k, i| if v[i].abs() > v[k].abs() + 1e-12 { i } else { k });
    if v[big] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    (lambda, v)
}

fn normalize(v: &mut [f64]) -> f64 {
    let nrm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if nrm > 0.0 {
        v.iter_mut().for_each(|x| *x /= nrm);
    }
    nrm
}

/// Rotation or reflection plus translation, no scaling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RigidTransform {
    /// Row-vector convention: p' = p·R + t.
    pub r: [[f64; 2]; 2],
    pub t: Point2,
}

impl RigidTransform {
    pub fn apply(&self, p: Point2) -> Point2 {
        Point2::new(p.x * self.r[0][0] + p.y * self.r[1][0] + self.t.x, p.x * self.r[0][1] + p.y * self.r[1][1] + self.t.y)
    }
}

/// Orthogonal transform minimizing Σ‖moving_i·R + t − target_i‖².
pub fn procrustes(moving: &[Point2], target: &[Point2]) -> RigidTransform {
    let (cm, ct) = (centroid(moving), centroid(target));
    let mut a = [[0.0; 2]; 2];
    for (p, q) in moving.iter().zip(target) {
        let (y, x) = (p.sub(cm), q.sub(ct));
        a[0][0] += y.x * x.x;
        a[0][1] += y.x * x.y;
        a[1][0] += y.y * x.x;
        a[1][1] += y.y * x.y;
    }
    let rot = (a[1][0] - a[0][1]).hypot(a[0][0] + a[1][1]);
    let refl = (a[0][0] - a[1][1]).hypot(a[0][1] + a[1][0]);
    let r = if rot >= refl {
        let th = (a[1][0] - a[0][1]).atan2(a[0][0] + a[1][1]);
        [[th.cos(), -th.sin()], [th.sin(), th.cos()]]
    } else {
        let th = (a[0][1] + a[1][0]).atan2(a[0][0] - a[1][1]);
        [[th.cos(), th.sin()], [th.sin(), -th.cos()]]
    };
    let rc = RigidTransform { r, t: Point2::default() }.apply(cm);
    RigidTransform { r, t: ct.sub(rc) }
}

/// Kruskal stress-1 of planar coordinates against a target matrix.
pub fn stress(coords: &[Point2], m: &DistanceMatrix) -> f64 {
    let n = coords.len();
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..n {
        for j in i + 1..n {
            let t = 0.5 * (m.get(i, j) + m.get(j, i));
            num += (coords[i].dist(coords[j]) - t).powi(2);
            den += t * t;
        }
    }
    if den > 0.0 {
        (num / den).sqrt()
    } else {
        0.0
    }
}

/// MDS projection aligned onto its source points.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    pub source: PointSet,
    pub projected: Vec<Point2>,
    pub stress: f64,
    pub effective_dims: usize,
}

impl Projection {
    /// ‖source_k − projected_k‖ per point.
    pub fn displacements(&self) -> Vec<f64> {
        self.source.points().iter().zip(&self.projected).map(|(s, p)| s.pos.dist(*p)).collect()
    }
}

pub fn mds_project(m: &DistanceMatrix, source: &PointSet) -> Result<Projection> {
    if m.n() != source.len() {
        return Err(TwcError::Invalid(format!("matrix has {} rows for {} points", m.n(), source.len())));
    }
    let emb = classical_mds(m);
    let tf = procrustes(&emb.coords, &source.positions());
    let projected: Vec<Point2> = emb.coords.iter().map(|p| tf.apply(*p)).collect();
    Ok(Projection { source: source.clone(), stress: stress(&projected, m), projected, effective_dims: emb.effective_dims })
}
