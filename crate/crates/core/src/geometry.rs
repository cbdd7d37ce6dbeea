//! Planar primitives: points, convex hulls, polylines.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dist(self, o: Point2) -> f64 {
        (self.x - o.x).hypot(self.y - o.y)
    }

    pub fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }

    pub fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }

    pub fn scale(self, s: f64) -> Point2 {
        Point2::new(self.x * s, self.y * s)
    }

    pub fn cross(self, o: Point2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }
}

/// Arithmetic mean of the points.
pub fn centroid(pts: &[Point2]) -> Point2 {
    let n = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(sx, sy), p| (sx + p.x, sy + p.y));
    Point2::new(sx / n, sy / n)
}

/// Convex hull in counter-clockwise order (Andrew's monotone chain).
/// Collinear boundary points are dropped.
pub fn convex_hull(pts: &[Point2]) -> Vec<Point2> {
    let mut p: Vec<Point2> = pts.to_vec();
    p.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    p.dedup();
    if p.len() < 3 {
        return p;
    }
    let turn = |o: Point2, a: Point2, b: Point2| a.sub(o).cross(b.sub(o));
    let mut hull: Vec<Point2> = Vec::with_capacity(2 * p.len());
    for &q in &p {
        while hull.len() >= 2 && turn(hull[hull.len() - 2], hull[hull.len() - 1], q) <= 0.0 {
            hull.pop();
        }
        hull.push(q);
    }
    let lower = hull.len() + 1;
    for &q in p.iter().rev().skip(1) {
        while hull.len() >= lower && turn(hull[hull.len() - 2], hull[hull.len() - 1], q) <= 0.0 {
            hull.pop();
        }
        hull.push(q);
    }
    hull.pop();
    hull
}

/// Point-in-convex-polygon test with absolute tolerance `tol`.
/// `hull` must be counter-clockwise as returned by [`convex_hull`].
pub fn in_convex_hull(hull: &[Point2], q: Point2, tol: f64) -> bool {
    match hull.len() {
        0 => false,
        1 => hull[0].dist(q) <= tol,
        2 => segment_dist(hull[0], hull[1], q) <= tol,
        n => (0..n).all(|k| {
            let a = hull[k];
            let b = hull[(k + 1) % n];
            let e = b.sub(a);
            // signed distance of q to the left of edge a->b
            e.cross(q.sub(a)) / e.norm() >= -tol
        }),
    }
}

fn segment_dist(a: Point2, b: Point2, q: Point2) -> f64 {
    let e = b.sub(a);
    let l2 = e.x * e.x + e.y * e.y;
    if l2 == 0.0 {
        return a.dist(q);
    }
    let t = ((q.sub(a).x * e.x + q.sub(a).y * e.y) / l2).clamp(0.0, 1.0);
    a.add(e.scale(t)).dist(q)
}

/// Sum of consecutive segment lengths.
pub fn polyline_length(pts: &[Point2]) -> f64 {
    pts.windows(2).map(|w| w[0].dist(w[1])).sum()
}

/// Signed area enclosed by the polyline and the chord closing it
/// (positive when the polyline runs counter-clockwise around the enclosed region).
pub fn signed_area_to_chord(pts: &[Point2]) -> f64 {
    let n = pts.len();
    if n < 3 {
        return 0.0;
    }
    let o = pts[0];
    let mut a = 0.0;
    for k in 0..n {
        let p = pts[k].sub(o);
        let q = pts[(k + 1) % n].sub(o);
        a += p.cross(q);
    }
    0.5 * a
}

/// Great-circle distance in km between (lat, lon) pairs given in degrees.
pub fn haversine_km(lat1: f64, lon1: f64, lat2: f64, lon2: f64) -> f64 {
    const R: f64 = 6371.0088;
    let (p1, p2) = (lat1.to_radians(), lat2.to_radians());
    let dp = p2 - p1;
    let dl = (lon2 - lon1).to_radians();
    let h = (dp / 2.0).sin().powi(2) + p1.cos() * p2.cos() * (dl / 2.0).sin().powi(2);
    2.0 * R * h.sqrt().asin()
}
