use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Result, TwcError};
use crate::geometry::Point2;

/// Raster window. Row 0 is the northern (max-y) row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridWindow {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub rows: usize,
    pub cols: usize,
}

impl GridWindow {
    pub const DEFAULT_MARGIN: f64 = 0.1;
    pub const DEFAULT_SIZE: usize = 400;

    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64, rows: usize, cols: usize) -> Result<Self> {
        if rows < 2 || cols < 2 {
            return Err(TwcError::Invalid(format!("grid must be at least 2x2, got {rows}x{cols}")));
        }
        if !(x_min < x_max && y_min < y_max) || ![x_min, x_max, y_min, y_max].iter().all(|v| v.is_finite()) {
            return Err(TwcError::Invalid("grid bounds must be finite and strictly ordered".into()));
        }
        Ok(Self { x_min, x_max, y_min, y_max, rows, cols })
    }

    /// Window enclosing `pts` with `margin` of each span added on every side.
    /// The shorter axis is widened so cells are square.
    pub fn around(pts: &[Point2], rows: usize, cols: usize, margin: f64) -> Result<Self> {
        if pts.is_empty() {
            return Err(TwcError::Invalid("cannot frame an empty point list".into()));
        }
        if !(margin >= 0.0) {
            return Err(TwcError::Invalid(format!("margin must be nonnegative, got {margin}")));
        }
        let (mut lo, mut hi) = (pts[0], pts[0]);
        for p in pts {
            lo = Point2::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point2::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        let (sx, sy) = (hi.x - lo.x, hi.y - lo.y);
        if sx.max(sy) <= 0.0 {
            return Err(TwcError::DegenerateDataset("all points coincide".into()));
        }
        let (w, h) = (sx * (1.0 + 2.0 * margin), sy * (1.0 + 2.0 * margin));
        let cell = (w / cols as f64).max(h / rows as f64);
        let (cx, cy) = (0.5 * (lo.x + hi.x), 0.5 * (lo.y + hi.y));
        let (hw, hh) = (0.5 * cell * cols as f64, 0.5 * cell * rows as f64);
        Self::new(cx - hw, cx + hw, cy - hh, cy + hh, rows, cols)
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.cols as f64
    }

    pub fn dy(&self) -> f64 {
        (self.y_max - self.y_min) / self.rows as f64
    }

    pub fn cell_center(&self, r: usize, c: usize) -> Point2 {
        Point2::new(self.x_min + (c as f64 + 0.5) * self.dx(), self.y_max - (r as f64 + 0.5) * self.dy())
    }

    /// Cell containing `p`, if inside the window.
    pub fn cell_of(&self, p: Point2) -> Option<(usize, usize)> {
        if p.x < self.x_min || p.x > self.x_max || p.y < self.y_min || p.y > self.y_max {
            return None;
        }
        let c = (((p.x - self.x_min) / self.dx()) as usize).min(self.cols - 1);
        let r = (((self.y_max - p.y) / self.dy()) as usize).min(self.rows - 1);
        Some((r, c))
    }

    pub fn contains(&self, p: Point2) -> bool {
        self.cell_of(p).is_some()
    }

    pub fn len(&self) -> usize {
        self.rows * self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldKind {
    Alpha,
    Beta,
    Gamma,
    Theta,
    Metacluster,
}

impl FieldKind {
    pub fn name(self) -> &'static str {
        match self {
            FieldKind::Alpha => "alpha",
            FieldKind::Beta => "beta",
            FieldKind::Gamma => "gamma",
            FieldKind::Theta => "theta",
            FieldKind::Metacluster => "metacluster",
        }
    }
}

/// Activation raster, row-major from the northern row.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarFieldGrid {
    pub window: GridWindow,
    pub values: Vec<f64>,
    pub kind: FieldKind,
}

impl ScalarFieldGrid {
    pub fn new(window: GridWindow, values: Vec<f64>, kind: FieldKind) -> Result<Self> {
        if values.len() != window.len() {
            return Err(TwcError::Invalid(format!("grid needs {} values, got {}", window.len(), values.len())));
        }
        Ok(Self { window, values, kind })
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.values[r * self.window.cols + c]
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// First cell (row-major) holding the maximum.
    pub fn argmax(&self) -> (usize, usize) {
        let mut best = 0;
        for (k, v) in self.values.iter().enumerate() {
            if *v > self.values[best] {
                best = k;
            }
        }
        (best / self.window.cols, best % self.window.cols)
    }

    /// Value at the cell containing `p`.
    pub fn sample(&self, p: Point2) -> Option<f64> {
        self.window.cell_of(p).map(|(r, c)| self.get(r, c))
    }

    /// Fraction of cells with value >= `frac` times the grid maximum.
    pub fn high_activation_fraction(&self, frac: f64) -> f64 {
        let thr = frac * self.max();
        self.values.iter().filter(|v| **v >= thr).count() as f64 / self.values.len() as f64
    }

    pub fn in_unit_interval(&self) -> bool {
        self.values.iter().all(|v| v.is_finite() && (0.0..=1.0).contains(v))
    }
}

const NODATA: f64 = -9999.0;

/// Six significant digits, shortest readable form.
fn fmt_value(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let a = v.abs();
    if (1e-4..1e6).contains(&a) {
        let decimals = (5 - a.log10().floor() as i32).max(0) as usize;
        let s = format!("{v:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        format!("{v:.5e}")
    }
}

/// ESRI ASCII grid. Non-square cells use `dx`/`dy` header lines instead of `cellsize`.
pub fn write_field(grid: &ScalarFieldGrid, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let w = &grid.window;
    let mut s = String::with_capacity(grid.values.len() * 9 + 128);
    let _ = writeln!(s, "ncols {}", w.cols);
    let _ = writeln!(s, "nrows {}", w.rows);
    let _ = writeln!(s, "xllcorner {}", w.x_min);
    let _ = writeln!(s, "yllcorner {}", w.y_min);
    if (w.dx() - w.dy()).abs() <= 1e-12 * w.dx().abs().max(w.dy().abs()) {
        let _ = writeln!(s, "cellsize {}", w.dx());
    } else {
        let _ = writeln!(s, "dx {}", w.dx());
        let _ = writeln!(s, "dy {}", w.dy());
    }
    let _ = writeln!(s, "NODATA_value {NODATA}");
    for r in 0..w.rows {
        let row: Vec<String> = (0..w.cols)
            .map(|c| grid.get(r, c))
            .map(|v| if v.is_finite() { fmt_value(v) } else { fmt_value(NODATA) })
            .collect();
        s.push_str(&row.join(" "));
        s.push('\n');
    }
    std::fs::write(path, s).map_err(|e| TwcError::io(path, e))
}

/// Read an ESRI ASCII grid. NODATA cells become NaN.
pub fn read_field(path: impl AsRef<Path>, kind: FieldKind) -> Result<ScalarFieldGrid> {
    let path = path.as_ref();
    let origin = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| TwcError::io(path, e))?;
    let perr = |line: u64, msg: String| TwcError::Parse { path: origin.clone(), line, msg };
    let mut lines = text.lines().enumerate().peekable();
    let mut hdr = std::collections::HashMap::new();
    while let Some((_, l)) = lines.peek() {
        let mut it = l.split_whitespace();
        match (it.next(), it.next()) {
            (Some(k), Some(v)) if k.chars().next().is_some_and(|c| c.is_ascii_alphabetic()) => {
                let (ln, _) = lines.next().expect("peeked");
                let v: f64 = v.parse().map_err(|_| perr(ln as u64 + 1, format!("bad header value `{v}`")))?;
                hdr.insert(k.to_ascii_lowercase(), v);
            }
            _ => break,
        }
    }
    let need = |k: &str| hdr.get(k).copied().ok_or_else(|| perr(0, format!("missing header `{k}`")));
    let (cols, rows) = (need("ncols")? as usize, need("nrows")? as usize);
    let (x0, y0) = (need("xllcorner")?, need("yllcorner")?);
    let (dx, dy) = match hdr.get("cellsize") {
        Some(c) => (*c, *c),
        None => (need("dx")?, need("dy")?),
    };
    let nodata = hdr.get("nodata_value").copied();
    let mut values = Vec::with_capacity(rows * cols);
    for (ln, l) in lines {
        for tok in l.split_whitespace() {
            let v: f64 = tok.parse().map_err(|_| perr(ln as u64 + 1, format!("bad value `{tok}`")))?;
            values.push(if Some(v) == nodata { f64::NAN } else { v });
        }
    }
    let window = GridWindow::new(x0, x0 + dx * cols as f64, y0, y0 + dy * rows as f64, rows, cols)?;
    ScalarFieldGrid::new(window, values, kind)
}
