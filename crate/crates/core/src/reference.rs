//! Bundled reference datasets.

use crate::dataset::{matrix::parse_matrix, points::parse_csv, DistanceMatrix, MatrixKind, PointSet};
use crate::metadistance::classical_mds;

const ETRUSCAN: &str = include_str!("../data/etruscan_distances.csv");
const HUS: &str = include_str!("../data/hus_2011.csv");

/// Pairwise distances among twelve Etruscan towns (abstract planar units).
pub fn etruscan_matrix() -> (Vec<String>, DistanceMatrix) {
    parse_matrix(ETRUSCAN, MatrixKind::Euclidean, "etruscan_distances.csv").expect("bundled matrix parses")
}

/// Planar coordinates of the Etruscan towns recovered from their distance matrix
/// by classical MDS, centered on the origin.
pub fn etruscan_points() -> PointSet {
    let (labels, d) = etruscan_matrix();
    let emb = classical_mds(&d);
    PointSet::planar("etruscan", labels.into_iter().zip(emb.coords).map(|(id, p)| (id, p.x, p.y)))
        .expect("bundled points are valid")
}

/// Thirteen German locations with confirmed HUS cases during the 2011 outbreak (lon/lat degrees).
pub fn hus_points() -> PointSet {
    parse_csv("hus_2011", HUS, "hus_2011.csv").expect("bundled points parse")
}

/// Hanover, (lon, lat) degrees.
pub const HANOVER: (f64, f64) = (9.73, 52.37);
