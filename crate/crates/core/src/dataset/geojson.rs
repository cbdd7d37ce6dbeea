use std::path::Path;

use serde_json::{json, Map, Value};

use crate::error::{Result, TwcError};
use crate::geometry::Point2;

/// Foreign member marking a collection whose coordinates are planar rather than lon/lat.
pub(crate) const CRS_MEMBER: &str = "twc:crs";

#[derive(Debug, Clone, PartialEq)]
pub enum Geometry {
    Point(Point2),
    LineString(Vec<Point2>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Feature {
    pub geometry: Geometry,
    pub properties: Map<String, Value>,
}

impl Feature {
    pub fn point(p: Point2) -> Self {
        Self { geometry: Geometry::Point(p), properties: Map::new() }
    }

    pub fn line(pts: Vec<Point2>) -> Self {
        Self { geometry: Geometry::LineString(pts), properties: Map::new() }
    }

    pub fn with(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.properties.insert(key.to_string(), v.into());
        self
    }

    fn to_value(&self) -> Value {
        let coord = |p: &Point2| json!([p.x, p.y]);
        let geometry = match &self.geometry {
            Geometry::Point(p) => json!({"type": "Point", "coordinates": coord(p)}),
            Geometry::LineString(ps) => {
                json!({"type": "LineString", "coordinates": ps.iter().map(coord).collect::<Vec<_>>()})
            }
        };
        json!({"type": "Feature", "geometry": geometry, "properties": self.properties})
    }
}

/// FeatureCollection text. Planar collections carry a `twc:crs` foreign member.
pub fn feature_collection(features: &[Feature], planar: bool) -> String {
    let mut fc = Map::new();
    fc.insert("type".into(), "FeatureCollection".into());
    if planar {
        fc.insert(CRS_MEMBER.into(), "planar".into());
    }
    fc.insert("features".into(), Value::Array(features.iter().map(Feature::to_value).collect()));
    Value::Object(fc).to_string()
}

pub fn write_geojson(features: &[Feature], planar: bool, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, feature_collection(features, planar)).map_err(|e| TwcError::io(path, e))
}
