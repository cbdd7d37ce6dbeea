//! Attraction weights, the weighted centroid, and the entropy / free-energy sweeps
//! that locate the Alpha Point and the self-interaction bandwidth β*.
//!
//! Sweeps run in the log domain: each row of exponents is shifted by its minimum
//! so weights never underflow, and the coarse scan advances by multiplying
//! precomputed per-step factors instead of re-evaluating every exponential.

use serde::{Deserialize, Serialize};

use crate::dataset::{euclidean_matrix, PointSet};
use crate::error::{Result, TwcError};
use crate::geometry::Point2;
use crate::indirect::{indirect_geometry, IndirectGeometry};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepKind {
    Alpha,
    Beta,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepStep {
    pub param: f64,
    pub twc: Point2,
    pub entropy: f64,
    /// −ln Z / param; −∞ at param 0.
    pub free_energy: f64,
    pub dist_from_mass_center: f64,
    /// Some normalized weight underflowed to exactly zero.
    pub underflow: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTrace {
    pub kind: SweepKind,
    pub steps: Vec<SweepStep>,
}

/// What to do when the coarse scan peaks at its last step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Unbracketed {
    Error,
    /// Accept the scan boundary and mark the result unbracketed.
    Boundary,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    /// Coarse step ε.
    pub step: f64,
    /// Upper end of the coarse scan.
    pub max: f64,
    /// Width at which the beta refinement stops; the alpha peak is solved to machine precision.
    pub tolerance: f64,
    /// Keep every k-th coarse TWC in the alpha vector.
    pub vector_stride: usize,
    pub unbracketed: Unbracketed,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self { step: 0.05, max: 500.0, tolerance: 1e-6, vector_stride: 1, unbracketed: Unbracketed::Error }
    }
}

impl SweepConfig {
    fn validate(&self) -> Result<usize> {
        if !(self.step > 0.0 && self.max > self.step && self.tolerance > 0.0 && self.vector_stride > 0) {
            return Err(TwcError::Invalid(format!("bad sweep configuration {self:?}")));
        }
        Ok((self.max / self.step).round() as usize)
    }
}

/// Self-interaction distance used by the β weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SelfTerm {
    /// A point is at distance 0 from itself: its self term is e^0 = 1.
    #[default]
    Zero,
    /// Use the mean indirect distance d̄_ii.
    MeanIndirect,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlphaResult {
    pub alpha_star: f64,
    pub alpha_point: Point2,
    /// TWC positions from the center of mass (α = 0) up to the Alpha Point.
    pub alpha_vector: Vec<Point2>,
    pub trace: SweepTrace,
    /// False when the free energy was still rising at the end of the scan.
    pub bracketed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BetaResult {
    pub beta_star: f64,
    pub stwc_at_star: Point2,
    pub trace: SweepTrace,
    /// The distance curve was flat: β* is the first scanned value.
    pub symmetric: bool,
    pub bracketed: bool,
    pub self_term: SelfTerm,
}

fn require_spread(g: &IndirectGeometry) -> Result<()> {
    if g.d_max > 0.0 {
        Ok(())
    } else {
        Err(TwcError::DegenerateDataset("all points coincide".into()))
    }
}

/// w_i(α) = 1/(N−1) Σ_{j≠i} exp(−α d̄_ij / D).
pub fn weights_alpha(g: &IndirectGeometry, alpha: f64) -> Result<Vec<f64>> {
    require_spread(g)?;
    let n = g.n();
    Ok((0..n)
        .map(|i| {
            (0..n).filter(|&j| j != i).map(|j| (-alpha * g.dbar.get(i, j) / g.d_max).exp()).sum::<f64>()
                / (n - 1) as f64
        })
        .collect())
}

/// w_i(β) = 1/(N−1) Σ_j exp(−β d̄_ij / D), the sum including j = i.
pub fn weights_beta(g: &IndirectGeometry, beta: f64, self_term: SelfTerm) -> Result<Vec<f64>> {
    require_spread(g)?;
    let k = Kernel::beta(g, self_term);
    Ok(k.log_weights(beta).into_iter().map(f64::exp).collect())
}

/// Weighted centroid of the point set.
pub fn twc(ps: &PointSet, w: &[f64]) -> Result<Point2> {
    weighted_centroid(&ps.positions(), w)
}

pub fn weighted_centroid(pts: &[Point2], w: &[f64]) -> Result<Point2> {
    if pts.len() != w.len() {
        return Err(TwcError::Invalid(format!("{} weights for {} points", w.len(), pts.len())));
    }
    let (mut sx, mut sy, mut sw) = (0.0, 0.0, 0.0);
    for (p, &wi) in pts.iter().zip(w) {
        sx += wi * p.x;
        sy += wi * p.y;
        sw += wi;
    }
    if !(sw > 0.0) {
        return Err(TwcError::Underflow);
    }
    Ok(Point2::new(sx / sw, sy / sw))
}

/// Shannon entropy (bits) of the normalized weights; zero weights contribute 0.
pub fn entropy(w: &[f64]) -> f64 {
    let z: f64 = w.iter().sum();
    -w.iter().map(|&wi| wi / z).filter(|&p| p > 0.0).map(|p| p * p.log2()).sum::<f64>()
}

/// F = −ln(Σw) / α.
pub fn free_energy(w: &[f64], alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(TwcError::Invalid("free energy is undefined at alpha = 0".into()));
    }
    let z: f64 = w.iter().sum();
    if !(z > 0.0) {
        return Err(TwcError::Underflow);
    }
    Ok(-z.ln() / alpha)
}

/// Row-shifted exponent table: w_i(a) = exp(−a·lo_i) · Σ_j exp(−a·c_ij) / (N−1).
struct Kernel {
    lo: Vec<f64>,
    c: Vec<Vec<f64>>,
    ln_norm: f64,
}

impl Kernel {
    fn from_rows(rows: Vec<Vec<f64>>, n: usize) -> Self {
        let lo: Vec<f64> = rows.iter().map(|r| r.iter().copied().fold(f64::INFINITY, f64::min)).collect();
        let c = rows.into_iter().zip(&lo).map(|(r, &m)| r.into_iter().map(|v| v - m).collect()).collect();
        Self { lo, c, ln_norm: ((n - 1) as f64).ln() }
    }

    fn alpha(g: &IndirectGeometry) -> Self {
        let n = g.n();
        let rows = (0..n)
            .map(|i| (0..n).filter(|&j| j != i).map(|j| g.dbar.get(i, j) / g.d_max).collect())
            .collect();
        Self::from_rows(rows, n)
    }

    fn beta(g: &IndirectGeometry, self_term: SelfTerm) -> Self {
        let n = g.n();
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| match (i == j, self_term) {
                        (true, SelfTerm::Zero) => 0.0,
                        _ => g.dbar.get(i, j) / g.d_max,
                    })
                    .collect()
            })
            .collect();
        Self::from_rows(rows, n)
    }

    /// α²·dF/dα = ln Z + α⟨u⟩, where ⟨u⟩ is the exponent mean under the kernel weights.
    fn free_energy_slope(&self, a: f64) -> f64 {
        let m = self.lo.iter().copied().fold(f64::INFINITY, f64::min);
        let (mut s, mut t) = (0.0, 0.0);
        for (&lo, row) in self.lo.iter().zip(&self.c) {
            for &v in row {
                let u = lo + v - m;
                let e = (-a * u).exp();
                s += e;
                t += u * e;
            }
        }
        s.ln() - self.ln_norm + a * t / s
    }

    fn log_weights(&self, a: f64) -> Vec<f64> {
        self.lo
            .iter()
            .zip(&self.c)
            .map(|(&lo, row)| -a * lo + row.iter().map(|&v| (-a * v).exp()).sum::<f64>().ln() - self.ln_norm)
            .collect()
    }
}

/// Advances a kernel along a ladder a = k·ε by repeated multiplication.
struct Ladder<'k> {
    kernel: &'k Kernel,
    factor: Vec<Vec<f64>>,
    term: Vec<Vec<f64>>,
    step: f64,
    k: usize,
}

impl<'k> Ladder<'k> {
    fn new(kernel: &'k Kernel, step: f64) -> Self {
        let factor: Vec<Vec<f64>> =
            kernel.c.iter().map(|r| r.iter().map(|&v| (-step * v).exp()).collect()).collect();
        let term = kernel.c.iter().map(|r| vec![1.0; r.len()]).collect();
        Self { kernel, factor, term, step, k: 0 }
    }

    /// Log weights at the next rung.
    fn next(&mut self) -> (f64, Vec<f64>) {
        self.k += 1;
        let a = self.k as f64 * self.step;
        let lw = self
            .term
            .iter_mut()
            .zip(&self.factor)
            .zip(&self.kernel.lo)
            .map(|((t, f), &lo)| {
                let mut s = 0.0;
                for (ti, fi) in t.iter_mut().zip(f) {
                    *ti *= fi;
                    s += *ti;
                }
                -a * lo + s.ln() - self.kernel.ln_norm
            })
            .collect();
        (a, lw)
    }
}

/// Everything a sweep step needs from one set of log weights.
fn evaluate(pts: &[Point2], cm: Point2, a: f64, lw: &[f64]) -> SweepStep {
    let m = lw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let rel: Vec<f64> = lw.iter().map(|&v| (v - m).exp()).collect();
    let s: f64 = rel.iter().sum();
    let ln_z = m + s.ln();
    let (mut x, mut y, mut h) = (0.0, 0.0, 0.0);
    let mut underflow = false;
    for (p, &r) in pts.iter().zip(&rel) {
        let pi = r / s;
        x += r * p.x;
        y += r * p.y;
        if pi > 0.0 {
            h -= pi * pi.log2();
        } else {
            underflow = true;
        }
    }
    let twc = Point2::new(x / s, y / s);
    SweepStep {
        param: a,
        twc,
        entropy: h,
        free_energy: -ln_z / a,
        dist_from_mass_center: twc.dist(cm),
        underflow,
    }
}

fn origin_step(ps: &PointSet) -> SweepStep {
    let n = ps.len() as f64;
    SweepStep {
        param: 0.0,
        twc: ps.center_of_mass(),
        entropy: n.log2(),
        free_energy: f64::NEG_INFINITY,
        dist_from_mass_center: 0.0,
        underflow: false,
    }
}

/// Root of a function that is positive at `lo` and negative at `hi`, to machine precision.
fn bisect_sign(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Ternary search for the maximum of a unimodal `f` on [lo, hi].
fn ternary_max(mut lo: f64, mut hi: f64, tol: f64, f: impl Fn(f64) -> f64) -> f64 {
    while hi - lo >= tol {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if f(m1) < f(m2) {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    0.5 * (lo + hi)
}

/// Scan result shared by both sweeps.
struct Scan {
    steps: Vec<SweepStep>,
    best: usize,
}

fn scan(ps: &PointSet, kernel: &Kernel, cfg: &SweepConfig, score: impl Fn(&SweepStep) -> f64) -> Result<Scan> {
    let count = cfg.validate()?;
    let pts = ps.positions();
    let cm = ps.center_of_mass();
    let mut steps = Vec::with_capacity(count + 1);
    steps.push(origin_step(ps));
    let mut ladder = Ladder::new(kernel, cfg.step);
    let mut best = 1;
    let mut best_score = f64::NEG_INFINITY;
    for k in 1..=count {
        let (a, lw) = ladder.next();
        let s = evaluate(&pts, cm, a, &lw);
        let sc = score(&s);
        if sc > best_score {
            best_score = sc;
            best = k;
        }
        steps.push(s);
    }
    Ok(Scan { steps, best })
}

pub fn alpha_sweep(ps: &PointSet) -> Result<AlphaResult> {
    alpha_sweep_with(ps, &SweepConfig::default())
}

/// Coarse scan of F(α) = −ln Z / α over (0, α_max], then bisection on the sign of dF/dα.
pub fn alpha_sweep_with(ps: &PointSet, cfg: &SweepConfig) -> Result<AlphaResult> {
    let g = indirect_geometry(&euclidean_matrix(ps))?;
    require_spread(&g)?;
    let kernel = Kernel::alpha(&g);
    let sc = scan(ps, &kernel, cfg, |s| s.free_energy)?;
    let last = sc.steps.len() - 1;
    let pts = ps.positions();
    let cm = ps.center_of_mass();
    let (alpha_star, alpha_point, bracketed) = if sc.best == last {
        match cfg.unbracketed {
            Unbracketed::Error => return Err(TwcError::AlphaNotBracketed { alpha_max: cfg.max }),
            Unbracketed::Boundary => (sc.steps[last].param, sc.steps[last].twc, false),
        }
    } else {
        let lo = if sc.best == 1 { 0.5 * cfg.step } else { sc.steps[sc.best - 1].param };
        let hi = sc.steps[sc.best + 1].param;
        let a = bisect_sign(lo, hi, |a| kernel.free_energy_slope(a));
        (a, evaluate(&pts, cm, a, &kernel.log_weights(a)).twc, true)
    };
    let mut alpha_vector: Vec<Point2> = sc
        .steps
        .iter()
        .take_while(|s| s.param <= alpha_star)
        .step_by(cfg.vector_stride)
        .map(|s| s.twc)
        .collect();
    alpha_vector.push(alpha_point);
    Ok(AlphaResult {
        alpha_star,
        alpha_point,
        alpha_vector,
        trace: SweepTrace { kind: SweepKind::Alpha, steps: sc.steps },
        bracketed,
    })
}

pub fn beta_sweep(ps: &PointSet) -> Result<BetaResult> {
    beta_sweep_with(ps, &SweepConfig::default(), SelfTerm::default())
}

/// Scan of the self-interacting centroid's distance from the center of mass; β* is its peak.
pub fn beta_sweep_with(ps: &PointSet, cfg: &SweepConfig, self_term: SelfTerm) -> Result<BetaResult> {
    let g = indirect_geometry(&euclidean_matrix(ps))?;
    require_spread(&g)?;
    let kernel = Kernel::beta(&g, self_term);
    let sc = scan(ps, &kernel, cfg, |s| s.dist_from_mass_center)?;
    let scale = euclidean_matrix(ps).max_d();
    let pts = ps.positions();
    let cm = ps.center_of_mass();
    let last = sc.steps.len() - 1;
    let peak = sc.steps[sc.best].dist_from_mass_center;
    let (beta_star, stwc_at_star, symmetric, bracketed) = if peak <= 1e-12 * scale {
        (sc.steps[1].param, sc.steps[1].twc, true, true)
    } else if sc.best == last {
        (sc.steps[last].param, sc.steps[last].twc, false, false)
    } else {
        let lo = sc.steps[sc.best - 1].param;
        let hi = sc.steps[sc.best + 1].param;
        let f = |b: f64| evaluate(&pts, cm, b, &kernel.log_weights(b)).dist_from_mass_center;
        let b = ternary_max(lo, hi, cfg.tolerance, f);
        (b, evaluate(&pts, cm, b, &kernel.log_weights(b)).twc, false, true)
    };
    Ok(BetaResult {
        beta_star,
        stwc_at_star,
        trace: SweepTrace { kind: SweepKind::Beta, steps: sc.steps },
        symmetric,
        bracketed,
        self_term,
    })
}
