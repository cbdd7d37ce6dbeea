//! Point ingestion, distance matrices, raster windows and output writers.

mod geojson;
mod grid;
pub(crate) mod matrix;
pub(crate) mod points;

pub use geojson::{write_geojson, Feature, Geometry};
pub use grid::{read_field, write_field, FieldKind, GridWindow, ScalarFieldGrid};
pub use matrix::{euclidean_matrix, read_matrix, write_matrix, DistanceMatrix, MatrixKind};
pub use points::{load_points, parse_coordinate, Crs, InputFormat, LabeledPoint, LocalProjection, PointSet};
