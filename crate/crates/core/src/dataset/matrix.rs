use std::path::Path;

use serde::{Deserialize, Serialize};

use super::PointSet;
use crate::error::{Result, TwcError};
use crate::geometry::Point2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixKind {
    Euclidean,
    Indirect,
    Meta,
    Theta,
}

/// Dense row-major square matrix of nonnegative distances.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    values: Vec<f64>,
    kind: MatrixKind,
    max_d: f64,
}

impl DistanceMatrix {
    pub fn new(n: usize, values: Vec<f64>, kind: MatrixKind) -> Result<Self> {
        if values.len() != n * n {
            return Err(TwcError::Invalid(format!("matrix needs {} entries, got {}", n * n, values.len())));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(TwcError::Invalid(format!("matrix entry {v} is not a finite nonnegative number")));
        }
        let max_d = values.iter().copied().fold(0.0, f64::max);
        Ok(Self { n, values, kind, max_d })
    }

    /// Build from a function of (i, j).
    pub fn from_fn(n: usize, kind: MatrixKind, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        let values = (0..n * n).map(|k| f(k / n, k % n)).collect();
        Self::new(n, values, kind)
    }

    /// Pairwise Euclidean distances of arbitrary positions.
    pub fn euclidean(pos: &[Point2]) -> Self {
        let n = pos.len();
        let mut values = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let d = pos[i].dist(pos[j]);
                values[i * n + j] = d;
                values[j * n + i] = d;
            }
        }
        let max_d = values.iter().copied().fold(0.0, f64::max);
        Self { n, values, kind: MatrixKind::Euclidean, max_d }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> MatrixKind {
        self.kind
    }

    /// Largest entry.
    pub fn max_d(&self) -> f64 {
        self.max_d
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n..(i + 1) * self.n]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Off-diagonal entries in row-major order.
    pub fn off_diagonal(&self) -> impl Iterator<Item = f64> + '_ {
        let n = self.n;
        self.values.iter().enumerate().filter(move |(k, _)| k / n != k % n).map(|(_, v)| *v)
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| (self.get(i, j) - self.get(j, i)).abs() <= tol))
    }

    /// (θ_ij + θ_ji) / 2.
    pub fn symmetrized(&self) -> DistanceMatrix {
        let n = self.n;
        let values = (0..n * n).map(|k| 0.5 * (self.values[k] + self.values[(k % n) * n + k / n])).collect();
        let mut m = Self { n, values, kind: self.kind, max_d: 0.0 };
        m.max_d = m.values.iter().copied().fold(0.0, f64::max);
        m
    }

    pub fn with_kind(mut self, kind: MatrixKind) -> Self {
        self.kind = kind;
        self
    }
}

/// Euclidean distance matrix of a point set in its own coordinate frame.
pub fn euclidean_matrix(ps: &PointSet) -> DistanceMatrix {
    DistanceMatrix::euclidean(&ps.positions())
}

/// CSV with a header row `id,<labels...>` and one labeled row per point.
pub fn write_matrix(m: &DistanceMatrix, labels: &[String], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let io = |e: csv::Error| TwcError::io(path, std::io::Error::other(e));
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    let label = |i: usize| labels.get(i).cloned().unwrap_or_else(|| i.to_string());
    let mut header = vec!["id".to_string()];
    header.extend((0..m.n).map(label));
    w.write_record(&header).map_err(io)?;
    for i in 0..m.n {
        let mut rec = vec![label(i)];
        rec.extend(m.row(i).iter().map(|v| v.to_string()));
        w.write_record(&rec).map_err(io)?;
    }
    w.flush().map_err(|e| TwcError::io(path, e))
}

/// Read a matrix written by [`write_matrix`] (first column and header row hold labels).
pub fn read_matrix(path: impl AsRef<Path>, kind: MatrixKind) -> Result<(Vec<String>, DistanceMatrix)> {
    let path = path.as_ref();
    let origin = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| TwcError::io(path, e))?;
    parse_matrix(&text, kind, &origin)
}

pub(crate) fn parse_matrix(text: &str, kind: MatrixKind, origin: &str) -> Result<(Vec<String>, DistanceMatrix)> {
    let perr = |line: u64, msg: String| TwcError::Parse { path: origin.to_string(), line, msg };
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let header = rdr.headers().map_err(|e| perr(1, e.to_string()))?.clone();
    let n = header.len().saturating_sub(1);
    let mut labels = Vec::with_capacity(n);
    let mut values = Vec::with_capacity(n * n);
    for rec in rdr.records() {
        let rec = rec.map_err(|e| perr(e.position().map_or(0, |p| p.line()), e.to_string()))?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() != n + 1 {
            return Err(perr(line, format!("expected {} fields, found {}", n + 1, rec.len())));
        }
        labels.push(rec[0].to_string());
        for f in rec.iter().skip(1) {
            values.push(f.parse::<f64>().map_err(|_| perr(line, format!("bad number `{f}`")))?);
        }
    }
    if labels.len() != n {
        return Err(perr(0, format!("matrix has {} rows but {n} columns", labels.len())));
    }
    Ok((labels, DistanceMatrix::new(n, values, kind)?))
}
