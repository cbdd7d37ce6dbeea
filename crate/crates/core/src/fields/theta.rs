//! Theta paths: nonlinear connections composed from two gamma trajectories,
//! and the minimum spanning tree over their lengths.

use serde::Serialize;

use super::GammaTrajectory;
use crate::dataset::{DistanceMatrix, MatrixKind};
use crate::error::{Result, TwcError};
use crate::geometry::{polyline_length, Point2};

/// path_ij(t) = x_j + T_i(t) − T_j(t) for t < min(Q_i, Q_j): starts at point j, heads to point i.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThetaPath {
    pub i: usize,
    pub j: usize,
    pub samples: Vec<Point2>,
    /// Polyline length θ_ij.
    pub length: f64,
    /// One of the two trajectories did not converge.
    pub flagged: bool,
}

/// Points and their trajectories, from which any theta path can be rebuilt.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaSet {
    pub points: Vec<Point2>,
    pub trajectories: Vec<GammaTrajectory>,
}

impl ThetaSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn samples(&self, i: usize, j: usize) -> impl Iterator<Item = Point2> + '_ {
        let (ti, tj) = (&self.trajectories[i].samples, &self.trajectories[j].samples);
        let xj = self.points[j];
        ti.iter().zip(tj).map(move |(a, b)| xj.add(a.sub(*b)))
    }

    pub fn path(&self, i: usize, j: usize) -> ThetaPath {
        let samples: Vec<Point2> = if i == j { vec![self.points[i]] } else { self.samples(i, j).collect() };
        ThetaPath {
            i,
            j,
            length: polyline_length(&samples),
            samples,
            flagged: !(self.trajectories[i].converged && self.trajectories[j].converged),
        }
    }

    fn length(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return 0.0;
        }
        let mut it = self.samples(i, j);
        let Some(mut prev) = it.next() else { return 0.0 };
        let mut len = 0.0;
        for p in it {
            len += prev.dist(p);
            prev = p;
        }
        len
    }
}

/// All pairwise theta lengths. Trajectories must be indexed like `points`.
pub fn theta_paths(points: &[Point2], trajectories: Vec<GammaTrajectory>) -> Result<(ThetaSet, DistanceMatrix)> {
    if trajectories.len() != points.len() || trajectories.iter().enumerate().any(|(k, t)| t.point_index != k) {
        return Err(TwcError::Invalid("trajectories must align with points".into()));
    }
    let set = ThetaSet { points: points.to_vec(), trajectories };
    let n = set.len();
    let theta = DistanceMatrix::from_fn(n, MatrixKind::Theta, |i, j| set.length(i, j))?;
    Ok((set, theta))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MstEdge {
    pub a: usize,
    pub b: usize,
    pub weight: f64,
    pub path: ThetaPath,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NlMst {
    pub edges: Vec<MstEdge>,
    pub total_weight: f64,
}

impl NlMst {
    /// Nodes joined to `node` by a tree edge.
    pub fn neighbours(&self, node: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|e| if e.a == node { Some(e.b) } else if e.b == node { Some(e.a) } else { None })
            .collect()
    }
}

/// Prim's algorithm on a dense matrix; ties go to the lower index. Edges are (parent, child, weight).
pub fn minimum_spanning_tree(w: &DistanceMatrix) -> Vec<(usize, usize, f64)> {
    let n = w.n();
    if n == 0 {
        return Vec::new();
    }
    let mut in_tree = vec![false; n];
    let mut best = vec![f64::INFINITY; n];
    let mut parent = vec![0usize; n];
    let mut edges = Vec::with_capacity(n - 1);
    best[0] = 0.0;
    for _ in 0..n {
        let u = (0..n).filter(|&v| !in_tree[v]).fold(None, |acc: Option<usize>, v| match acc {
            Some(a) if best[a] <= best[v] => Some(a),
            _ => Some(v),
        });
        let u = u.expect("a vertex remains");
        in_tree[u] = true;
        if u != 0 {
            edges.push((parent[u], u, best[u]));
        }
        for v in 0..n {
            if !in_tree[v] && w.get(u, v) < best[v] {
                best[v] = w.get(u, v);
                parent[v] = u;
            }
        }
    }
    edges
}

/// Spanning tree over the symmetrized theta lengths; each edge carries its path.
pub fn nl_mst(theta: &DistanceMatrix, set: &ThetaSet) -> NlMst {
    let sym = theta.symmetrized();
    let edges: Vec<MstEdge> = minimum_spanning_tree(&sym)
        .into_iter()
        .map(|(a, b, weight)| MstEdge { a, b, weight, path: set.path(a.max(b), a.min(b)) })
        .collect();
    let total_weight = edges.iter().map(|e| e.weight).sum();
    NlMst { edges, total_weight }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::gamma_trajectories;

    #[test]
    fn collinear_points_form_a_chain() {
        let pts: Vec<Point2> = [0.0, 1.0, 2.5, 4.0].iter().map(|&x| Point2::new(x, 0.0)).collect();
        let t = minimum_spanning_tree(&DistanceMatrix::euclidean(&pts));
        let mut e: Vec<(usize, usize)> = t.iter().map(|&(a, b, _)| (a.min(b), a.max(b))).collect();
        e.sort();
        assert_eq!(e, vec![(0, 1), (1, 2), (2, 3)]);
    }

    #[test]
    fn equilateral_theta_is_euclidean() {
        let pts = [Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(0.5, 3f64.sqrt() / 2.0)];
        let (set, th) = theta_paths(&pts, gamma_trajectories(&pts).unwrap()).unwrap();
        for i in 0..3 {
            assert_eq!(th.get(i, i), 0.0);
            for (j, &pj) in pts.iter().enumerate() {
                if i != j {
                    assert!((th.get(i, j) - 1.0).abs() < 2e-3, "{}", th.get(i, j));
                    assert_eq!(set.path(i, j).samples[0], pj);
                }
            }
        }
    }
}
