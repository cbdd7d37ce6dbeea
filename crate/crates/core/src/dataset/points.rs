use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Result, TwcError};
use crate::geometry::{centroid, Point2};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Crs {
    Planar,
    /// x = longitude, y = latitude, both in decimal degrees.
    Wgs84Degrees,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputFormat {
    Csv,
    Geojson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledPoint {
    pub id: String,
    pub pos: Point2,
}

/// Ordered, labeled 2-D events. Ids are unique, coordinates finite, N >= 3.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSet {
    name: String,
    points: Vec<LabeledPoint>,
    crs: Crs,
}

impl PointSet {
    pub const MIN_POINTS: usize = 3;

    pub fn new(name: impl Into<String>, points: Vec<LabeledPoint>, crs: Crs) -> Result<Self> {
        let mut seen = HashSet::new();
        for p in &points {
            if !seen.insert(p.id.as_str()) {
                return Err(TwcError::DuplicateId(p.id.clone()));
            }
            if !p.pos.x.is_finite() || !p.pos.y.is_finite() {
                return Err(TwcError::NonFinite { id: p.id.clone() });
            }
        }
        if points.len() < Self::MIN_POINTS {
            return Err(TwcError::DatasetTooSmall { n: points.len(), min: Self::MIN_POINTS });
        }
        Ok(Self { name: name.into(), points, crs })
    }

    /// Planar set from `(id, x, y)` triples.
    pub fn planar<S: Into<String>>(name: &str, pts: impl IntoIterator<Item = (S, f64, f64)>) -> Result<Self> {
        let points = pts
            .into_iter()
            .map(|(id, x, y)| LabeledPoint { id: id.into(), pos: Point2::new(x, y) })
            .collect();
        Self::new(name, points, Crs::Planar)
    }

    /// Planar set with ids `0..n`.
    pub fn from_positions(name: &str, pos: &[Point2]) -> Result<Self> {
        Self::planar(name, pos.iter().enumerate().map(|(i, p)| (i.to_string(), p.x, p.y)))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn crs(&self) -> Crs {
        self.crs
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[LabeledPoint] {
        &self.points
    }

    pub fn positions(&self) -> Vec<Point2> {
        self.points.iter().map(|p| p.pos).collect()
    }

    pub fn ids(&self) -> Vec<String> {
        self.points.iter().map(|p| p.id.clone()).collect()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.points.iter().position(|p| p.id == id)
    }

    pub fn center_of_mass(&self) -> Point2 {
        centroid(&self.positions())
    }

    /// (min corner, max corner) of the coordinates.
    pub fn bbox(&self) -> (Point2, Point2) {
        self.points.iter().fold(
            (Point2::new(f64::INFINITY, f64::INFINITY), Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY)),
            |(lo, hi), p| {
                (Point2::new(lo.x.min(p.pos.x), lo.y.min(p.pos.y)), Point2::new(hi.x.max(p.pos.x), hi.y.max(p.pos.y)))
            },
        )
    }

    /// Same ids, coordinates mapped through `f`.
    pub fn map_positions(&self, crs: Crs, f: impl Fn(Point2) -> Point2) -> PointSet {
        PointSet {
            name: self.name.clone(),
            points: self.points.iter().map(|p| LabeledPoint { id: p.id.clone(), pos: f(p.pos) }).collect(),
            crs,
        }
    }

    /// The set with point `idx` removed.
    pub fn without(&self, idx: usize) -> Result<PointSet> {
        let mut points = self.points.clone();
        points.remove(idx);
        PointSet::new(self.name.clone(), points, self.crs)
    }

    /// The set with one extra point appended.
    pub fn with_point(&self, id: &str, pos: Point2) -> Result<PointSet> {
        let mut points = self.points.clone();
        points.push(LabeledPoint { id: id.to_string(), pos });
        PointSet::new(self.name.clone(), points, self.crs)
    }

    /// Project a geographic set onto a local azimuthal-equidistant plane (km)
    /// centered on its mean coordinate.
    pub fn project_local(&self) -> (PointSet, LocalProjection) {
        let c = self.center_of_mass();
        let proj = LocalProjection { lon0: c.x, lat0: c.y };
        (self.map_positions(Crs::Planar, |p| proj.forward(p)), proj)
    }
}

/// Spherical azimuthal-equidistant projection around (lat0, lon0); planar units are km.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalProjection {
    pub lon0: f64,
    pub lat0: f64,
}

const EARTH_RADIUS_KM: f64 = 6371.0088;

impl LocalProjection {
    /// (lon, lat) degrees -> (x, y) km.
    pub fn forward(&self, p: Point2) -> Point2 {
        let (l0, p0) = (self.lon0.to_radians(), self.lat0.to_radians());
        let (l, ph) = (p.x.to_radians(), p.y.to_radians());
        let cosc = p0.sin() * ph.sin() + p0.cos() * ph.cos() * (l - l0).cos();
        let c = cosc.clamp(-1.0, 1.0).acos();
        let k = if c.abs() < 1e-12 { 1.0 } else { c / c.sin() };
        let x = k * ph.cos() * (l - l0).sin();
        let y = k * (p0.cos() * ph.sin() - p0.sin() * ph.cos() * (l - l0).cos());
        Point2::new(EARTH_RADIUS_KM * x, EARTH_RADIUS_KM * y)
    }

    /// (x, y) km -> (lon, lat) degrees.
    pub fn inverse(&self, q: Point2) -> Point2 {
        let (l0, p0) = (self.lon0.to_radians(), self.lat0.to_radians());
        let (x, y) = (q.x / EARTH_RADIUS_KM, q.y / EARTH_RADIUS_KM);
        let c = x.hypot(y);
        if c < 1e-15 {
            return Point2::new(self.lon0, self.lat0);
        }
        let ph = (c.cos() * p0.sin() + y * c.sin() * p0.cos() / c).clamp(-1.0, 1.0).asin();
        let l = l0 + (x * c.sin()).atan2(c * p0.cos() * c.cos() - y * p0.sin() * c.sin());
        Point2::new(l.to_degrees(), ph.to_degrees())
    }
}

/// Parse a decimal or DMS coordinate such as `53°33'55"N`, `52°22'N`,
/// `11°57'50"` or `-8.5`. S and W hemispheres are negated; a missing
/// hemisphere letter means positive.
pub fn parse_coordinate(s: &str) -> std::result::Result<f64, String> {
    let t = s.trim();
    if t.is_empty() {
        return Err("empty coordinate".into());
    }
    if let Ok(v) = t.parse::<f64>() {
        return Ok(v);
    }
    let mut body = t;
    let mut sign: f64 = 1.0;
    let hemi = |c: char| match c.to_ascii_uppercase() {
        'N' | 'E' => Some(1.0),
        'S' | 'W' => Some(-1.0),
        _ => None,
    };
    if let Some(c) = body.chars().last() {
        if let Some(h) = hemi(c) {
            sign = h;
            body = &body[..body.len() - c.len_utf8()];
        }
    }
    if let Some(c) = body.chars().next() {
        if let Some(h) = hemi(c) {
            sign = h;
            body = &body[c.len_utf8()..];
        }
    }
    let body = body.trim();
    let (neg, body) = match body.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, body),
    };
    let parts: Vec<&str> = body
        .split(|c: char| !(c.is_ascii_digit() || c == '.'))
        .filter(|p| !p.is_empty())
        .collect();
    if parts.is_empty() || parts.len() > 3 {
        return Err(format!("cannot parse coordinate `{s}`"));
    }
    let nums = parts
        .iter()
        .map(|p| p.parse::<f64>().map_err(|_| format!("bad number `{p}` in `{s}`")))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let (d, m, sec) = (nums[0], nums.get(1).copied().unwrap_or(0.0), nums.get(2).copied().unwrap_or(0.0));
    if m >= 60.0 || sec >= 60.0 {
        return Err(format!("minutes/seconds out of range in `{s}`"));
    }
    let v = d + m / 60.0 + sec / 3600.0;
    Ok(if neg { -v * sign.abs() } else { v * sign })
}

/// Load a point set from CSV (`id,x,y` or `id,lat,lon`) or GeoJSON points.
pub fn load_points(path: impl AsRef<Path>, format: InputFormat) -> Result<PointSet> {
    let path = path.as_ref();
    let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("points").to_string();
    let text = std::fs::read_to_string(path).map_err(|e| TwcError::io(path, e))?;
    match format {
        InputFormat::Csv => parse_csv(&name, &text, &path.display().to_string()),
        InputFormat::Geojson => parse_geojson(&name, &text, &path.display().to_string()),
    }
}

pub(crate) fn parse_csv(name: &str, text: &str, origin: &str) -> Result<PointSet> {
    let perr = |line: u64, msg: String| TwcError::Parse { path: origin.to_string(), line, msg };
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let headers: Vec<String> = rdr
        .headers()
        .map_err(|e| perr(1, e.to_string()))?
        .iter()
        .map(|h| h.to_ascii_lowercase())
        .collect();
    let col = |names: &[&str]| headers.iter().position(|h| names.contains(&h.as_str()));
    let id_col = col(&["id", "name"]).ok_or_else(|| perr(1, "missing `id` column".into()))?;
    let (xc, yc, crs) = match (col(&["x"]), col(&["y"]), col(&["lat", "latitude"]), col(&["lon", "lng", "longitude"])) {
        (Some(x), Some(y), _, _) => (x, y, Crs::Planar),
        (_, _, Some(lat), Some(lon)) => (lon, lat, Crs::Wgs84Degrees),
        _ => return Err(perr(1, "header must contain x,y or lat,lon".into())),
    };
    let mut points = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| perr(e.position().map_or(0, |p| p.line()), e.to_string()))?;
        let line = rec.position().map_or(0, |p| p.line());
        let field = |c: usize| rec.get(c).ok_or_else(|| perr(line, format!("missing column {}", c + 1)));
        let id = field(id_col)?.to_string();
        let x = parse_coordinate(field(xc)?).map_err(|m| perr(line, m))?;
        let y = parse_coordinate(field(yc)?).map_err(|m| perr(line, m))?;
        points.push(LabeledPoint { id, pos: Point2::new(x, y) });
    }
    PointSet::new(name, points, crs)
}

fn parse_geojson(name: &str, text: &str, origin: &str) -> Result<PointSet> {
    let perr = |msg: String| TwcError::Parse { path: origin.to_string(), line: 0, msg };
    let v: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| TwcError::Parse { path: origin.to_string(), line: e.line() as u64, msg: e.to_string() })?;
    let crs = match v.get(crate::dataset::geojson::CRS_MEMBER).and_then(|c| c.as_str()) {
        Some("planar") => Crs::Planar,
        _ => Crs::Wgs84Degrees,
    };
    let feats = v
        .get("features")
        .and_then(|f| f.as_array())
        .ok_or_else(|| perr("expected a FeatureCollection".into()))?;
    let mut points = Vec::new();
    for (k, f) in feats.iter().enumerate() {
        let geom = &f["geometry"];
        if geom["type"] != "Point" {
            continue;
        }
        let c = geom["coordinates"]
            .as_array()
            .filter(|c| c.len() >= 2)
            .ok_or_else(|| perr(format!("feature {k}: bad coordinates")))?;
        let num = |j: usize| c[j].as_f64().ok_or_else(|| perr(format!("feature {k}: non-numeric coordinate")));
        let id = [&f["id"], &f["properties"]["id"], &f["properties"]["name"]]
            .into_iter()
            .find_map(|v| match v {
                serde_json::Value::String(s) => Some(s.clone()),
                serde_json::Value::Number(n) => Some(n.to_string()),
                _ => None,
            })
            .unwrap_or_else(|| k.to_string());
        points.push(LabeledPoint { id, pos: Point2::new(num(0)?, num(1)?) });
    }
    PointSet::new(name, points, crs)
}
