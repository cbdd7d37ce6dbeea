//! End-to-end runs writing every artifact into an output directory, with a
//! MANIFEST recording the configuration hash, per-stage status and checksums.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::dataset::{
    load_points, read_matrix, write_field, write_geojson, write_matrix, Crs, DistanceMatrix, Feature, FieldKind,
    GridWindow, InputFormat, LocalProjection, MatrixKind, PointSet, ScalarFieldGrid,
};
use crate::dynamics::{dtmc_simulate, g_in_out, transition_matrix, DtmcConfig, TransitionMatrix};
use crate::error::TwcError;
use crate::fields::{
    activation_histogram, alpha_map, beta_map, gamma_clusters, gamma_map, gamma_step, gamma_trajectories_with,
    nl_mst, theta_map, theta_paths, GammaConfig, GammaLabel,
};
use crate::geometry::Point2;
use crate::loo::loo_alpha_with;
use crate::metadistance::{classical_mds, mds_project, metacluster_field, meta_distance_trace, vanishing_points, MetaConfig};
use crate::sweep::{alpha_sweep_with, beta_sweep_with, SelfTerm, SweepConfig, Unbracketed};

/// Label of the auxiliary Alpha node in theta/transition outputs.
pub const ALPHA_NODE: &str = "T.W.C.";

/// Planar frame used for geographic inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeoFrame {
    /// Longitude and latitude used directly as planar x and y.
    #[default]
    Degrees,
    /// Local azimuthal-equidistant projection (km) around the dataset centroid.
    Local,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub input: PathBuf,
    pub format: InputFormat,
    /// The input is a labeled distance matrix rather than points.
    pub matrix_input: bool,
    pub grid_rows: usize,
    pub grid_cols: usize,
    pub margin: f64,
    pub frame: GeoFrame,
    pub sweep: SweepConfig,
    pub beta_self: SelfTerm,
    pub gamma: GammaConfig,
    pub dtmc: DtmcConfig,
    pub meta: MetaConfig,
    #[serde(skip)]
    pub out: PathBuf,
}

impl RunConfig {
    pub fn new(input: impl Into<PathBuf>, out: impl Into<PathBuf>) -> Self {
        Self {
            input: input.into(),
            format: InputFormat::Csv,
            matrix_input: false,
            grid_rows: GridWindow::DEFAULT_SIZE,
            grid_cols: GridWindow::DEFAULT_SIZE,
            margin: GridWindow::DEFAULT_MARGIN,
            frame: GeoFrame::Degrees,
            sweep: SweepConfig { unbracketed: Unbracketed::Boundary, ..SweepConfig::default() },
            beta_self: SelfTerm::Zero,
            gamma: GammaConfig::default(),
            dtmc: DtmcConfig::default(),
            meta: MetaConfig::default(),
            out: out.into(),
        }
    }

    /// Every numeric parameter must be positive (margin may be zero).
    pub fn validate(&self) -> Result<(), TwcError> {
        let bad = |m: &str| Err(TwcError::Invalid(m.to_string()));
        if self.grid_rows < 2 || self.grid_cols < 2 {
            return bad("grid must be at least 2x2");
        }
        if !(self.margin >= 0.0 && self.margin.is_finite()) {
            return bad("margin must be a nonnegative number");
        }
        if !(self.sweep.step > 0.0 && self.sweep.max > self.sweep.step && self.sweep.tolerance > 0.0) {
            return bad("sweep step, maximum and tolerance must be positive with maximum > step");
        }
        if self.gamma.step.is_some_and(|s| !(s > 0.0)) || !(self.gamma.delta > 0.0) || self.gamma.t_max == 0 {
            return bad("gamma step, delta and t_max must be positive");
        }
        if self.dtmc.runs == 0 || self.dtmc.max_steps == 0 {
            return bad("dtmc runs and step cap must be positive");
        }
        if !(self.meta.epsilon > 0.0) || self.meta.max_iterations == 0 {
            return bad("meta-distance epsilon and iteration cap must be positive");
        }
        Ok(())
    }

    fn hash(&self) -> String {
        let text = serde_json::to_string(self).expect("config serializes");
        hex::encode(Sha256::digest(text.as_bytes()))
    }
}

/// A stage failed; outputs written so far are kept and listed in the MANIFEST.
#[derive(Debug, thiserror::Error)]
#[error("stage `{stage}` failed: {source}")]
pub struct StageError {
    pub stage: String,
    #[source]
    pub source: TwcError,
}

#[derive(Serialize)]
struct StageRecord {
    name: String,
    status: &'static str,
    outputs: Vec<(String, String)>,
}

/// Tracks stages and their files for the MANIFEST.
struct Run<'c> {
    cfg: &'c RunConfig,
    command: &'static str,
    stages: Vec<StageRecord>,
    warnings: Vec<String>,
}

impl<'c> Run<'c> {
    fn new(cfg: &'c RunConfig, command: &'static str) -> Result<Self, StageError> {
        std::fs::create_dir_all(&cfg.out)
            .map_err(|e| StageError { stage: "setup".into(), source: TwcError::io(&cfg.out, e) })?;
        Ok(Self { cfg, command, stages: Vec::new(), warnings: Vec::new() })
    }

    fn path(&self, name: &str) -> PathBuf {
        self.cfg.out.join(name)
    }

    /// Run one stage; `body` returns the file names it wrote.
    fn stage<T>(
        &mut self,
        name: &str,
        body: impl FnOnce(&mut Self) -> Result<(T, Vec<&'static str>), TwcError>,
    ) -> Result<T, StageError> {
        match body(self) {
            Ok((v, files)) => {
                let outputs = files.into_iter().map(|f| (f.to_string(), checksum(&self.path(f)))).collect();
                self.stages.push(StageRecord { name: name.into(), status: "ok", outputs });
                Ok(v)
            }
            Err(source) => {
                self.stages.push(StageRecord { name: name.into(), status: "failed", outputs: Vec::new() });
                self.write_manifest(false);
                Err(StageError { stage: name.into(), source })
            }
        }
    }

    fn write_manifest(&self, complete: bool) {
        let m = json!({
            "command": self.command,
            "complete": complete,
            "config": self.cfg,
            "config_sha256": self.cfg.hash(),
            "package": env!("CARGO_PKG_NAME"),
            "version": env!("CARGO_PKG_VERSION"),
            "stages": self.stages,
            "warnings": self.warnings,
        });
        // a failed MANIFEST write must not mask the stage error it reports
        let _ = std::fs::write(self.path("MANIFEST"), serde_json::to_string_pretty(&m).expect("json") + "\n");
    }

    fn finish(self) -> Result<(), StageError> {
        self.write_manifest(true);
        Ok(())
    }
}

fn checksum(path: &Path) -> String {
    std::fs::read(path).map(|b| hex::encode(Sha256::digest(&b))).unwrap_or_default()
}

fn write_text(path: PathBuf, text: &str) -> Result<(), TwcError> {
    std::fs::write(&path, text).map_err(|e| TwcError::io(path, e))
}

/// Input points in the working frame, plus the map back to output coordinates.
struct Loaded {
    ps: PointSet,
    source_crs: Crs,
    projection: Option<LocalProjection>,
    matrix: Option<DistanceMatrix>,
}

impl Loaded {
    fn to_output(&self, p: Point2) -> Point2 {
        self.projection.map_or(p, |pr| pr.inverse(p))
    }

    fn planar_output(&self) -> bool {
        self.source_crs == Crs::Planar
    }
}

fn load(cfg: &RunConfig, warnings: &mut Vec<String>) -> Result<Loaded, TwcError> {
    if cfg.matrix_input {
        let (labels, d) = read_matrix(&cfg.input, MatrixKind::Euclidean)?;
        if !d.is_symmetric(1e-9 * d.max_d()) {
            warnings.push("input matrix is not symmetric; embedding uses its symmetric part".into());
        }
        let emb = classical_mds(&d.symmetrized());
        let ps = PointSet::planar("matrix", labels.into_iter().zip(&emb.coords).map(|(id, p)| (id, p.x, p.y)))?;
        let st = crate::metadistance::stress(&emb.coords, &d);
        if st > 1e-6 {
            warnings.push(format!("input matrix is not exactly planar Euclidean (stress {st:.3e})"));
        }
        return Ok(Loaded { ps, source_crs: Crs::Planar, projection: None, matrix: Some(d) });
    }
    let raw = load_points(&cfg.input, cfg.format)?;
    let source_crs = raw.crs();
    if source_crs == Crs::Wgs84Degrees && cfg.frame == GeoFrame::Local {
        let (ps, pr) = raw.project_local();
        return Ok(Loaded { ps, source_crs, projection: Some(pr), matrix: None });
    }
    Ok(Loaded { ps: raw, source_crs, projection: None, matrix: None })
}

fn point_features(l: &Loaded) -> Vec<Feature> {
    l.ps.points().iter().map(|p| Feature::point(l.to_output(p.pos)).with("id", p.id.clone())).collect()
}

fn unique_label(ps: &PointSet, base: &str) -> String {
    let mut label = base.to_string();
    while ps.index_of(&label).is_some() {
        label.push('\'');
    }
    label
}

fn tm_csv(tm: &TransitionMatrix) -> String {
    let n = tm.n();
    let mut s = String::from("id");
    for l in &tm.labels {
        let _ = write!(s, ",{l}");
    }
    s.push('\n');
    for i in 0..n {
        s.push_str(&tm.labels[i]);
        for j in 0..n {
            let _ = write!(s, ",{}", tm.get(i, j));
        }
        s.push('\n');
    }
    s
}

fn point_json(p: Point2) -> serde_json::Value {
    json!({"x": p.x, "y": p.y})
}

/// Which fields a run should produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Fields {
    All,
    Only(FieldKind),
}

impl Fields {
    fn wants(self, k: FieldKind) -> bool {
        self == Fields::All || self == Fields::Only(k)
    }
}

/// Alpha, Beta, Gamma and Theta stages, G IN-OUT and chain simulation.
pub fn cmd_analyze(cfg: &RunConfig) -> Result<(), StageError> {
    analyze(cfg, Fields::All, "analyze")
}

/// Recompute and write a single field.
pub fn cmd_field(cfg: &RunConfig, kind: FieldKind) -> Result<(), StageError> {
    if kind == FieldKind::Metacluster {
        return metadist(cfg, false, "field");
    }
    analyze(cfg, Fields::Only(kind), "field")
}

fn write_grid(run: &Run, g: &ScalarFieldGrid, name: &'static str, warn: &mut Vec<String>) -> Result<(), TwcError> {
    if !g.in_unit_interval() {
        warn.push(format!("{name}: values outside [0,1]"));
    }
    write_field(g, run.path(name))
}

fn analyze(cfg: &RunConfig, fields: Fields, command: &'static str) -> Result<(), StageError> {
    let all = fields == Fields::All;
    let mut run = Run::new(cfg, command)?;
    let loaded = run.stage("load", |r| {
        let mut w = Vec::new();
        let l = load(r.cfg, &mut w)?;
        r.warnings.extend(w);
        if all {
            write_geojson(&point_features(&l), l.planar_output(), r.path("points.geojson"))?;
            return Ok((l, vec!["points.geojson"]));
        }
        Ok((l, vec![]))
    })?;
    let ps = &loaded.ps;
    let window = run.stage("window", |r| {
        Ok((GridWindow::around(&ps.positions(), r.cfg.grid_rows, r.cfg.grid_cols, r.cfg.margin)?, vec![]))
    })?;

    let (ar, br, histogram) = run.stage("alpha", |r| {
        let ar = alpha_sweep_with(ps, &r.cfg.sweep)?;
        if !ar.bracketed {
            r.warnings.push(format!("free energy still rising at alpha_max = {}; alpha point taken at the boundary", r.cfg.sweep.max));
        }
        let br = beta_sweep_with(ps, &r.cfg.sweep, r.cfg.beta_self)?;
        if br.symmetric {
            r.warnings.push("symmetric dataset: beta distance curve is flat".into());
        }
        let mut files = vec![];
        let mut histogram = Vec::new();
        if fields.wants(FieldKind::Alpha) {
            let am = alpha_map(ps, &ar, &br, &window)?;
            histogram = activation_histogram(&am, 10);
            let mut w = Vec::new();
            write_grid(r, &am, "alpha.asc", &mut w)?;
            r.warnings.extend(w);
            files.push("alpha.asc");
        }
        if all {
            let vector: Vec<Point2> = ar.alpha_vector.iter().map(|p| loaded.to_output(*p)).collect();
            let feats = vec![
                Feature::point(loaded.to_output(ar.alpha_point)).with("kind", "alpha_point").with("alpha_star", ar.alpha_star),
                Feature::line(vector).with("kind", "alpha_vector"),
            ];
            write_geojson(&feats, loaded.planar_output(), r.path("alpha.geojson"))?;
            files.push("alpha.geojson");
        }
        Ok(((ar, br, histogram), files))
    })?;

    if fields.wants(FieldKind::Beta) {
        run.stage("beta", |r| {
            let bm = beta_map(ps, &br, &window)?;
            let mut w = Vec::new();
            write_grid(r, &bm, "beta.asc", &mut w)?;
            r.warnings.extend(w);
            Ok(((), vec!["beta.asc"]))
        })?;
    }

    if fields.wants(FieldKind::Gamma) {
        run.stage("gamma", |r| {
            let trajs = gamma_trajectories_with(&ps.positions(), &r.cfg.gamma)?;
            let unconverged = trajs.iter().filter(|t| !t.converged).count();
            if unconverged > 0 {
                r.warnings.push(format!("{unconverged} gamma trajectories hit t_max"));
            }
            let gm = gamma_map(ps, &trajs, &br, &window)?;
            let mut w = Vec::new();
            write_grid(r, &gm, "gamma.asc", &mut w)?;
            r.warnings.extend(w);
            if !all {
                return Ok(((), vec!["gamma.asc"]));
            }
            let cl = gamma_clusters(&trajs, r.cfg.gamma.bend_tol);
            if let Some(wn) = &cl.warning {
                r.warnings.push(wn.clone());
            }
            let label = |l: GammaLabel| match l {
                GammaLabel::Cluster(k) => k.to_string(),
                GammaLabel::Boundary => "boundary".to_string(),
            };
            let feats: Vec<Feature> = trajs
                .iter()
                .map(|t| {
                    let id = ps.points()[t.point_index].id.clone();
                    Feature::line(t.samples.iter().map(|p| loaded.to_output(*p)).collect())
                        .with("id", id)
                        .with("converged", t.converged)
                        .with("bend", cl.bends[t.point_index])
                        .with("cluster", label(cl.labels[t.point_index]))
                })
                .collect();
            write_geojson(&feats, loaded.planar_output(), r.path("trajectories.geojson"))?;
            let mut csv = String::from("id,bend,cluster\n");
            for (k, p) in ps.points().iter().enumerate() {
                let _ = writeln!(csv, "{},{},{}", p.id, cl.bends[k], label(cl.labels[k]));
            }
            write_text(r.path("clusters.csv"), &csv)?;
            Ok(((), vec!["gamma.asc", "trajectories.geojson", "clusters.csv"]))
        })?;
    }

    let needs_theta = all || fields.wants(FieldKind::Theta);
    if !needs_theta {
        return run.finish();
    }
    let (aug, theta, mst) = run.stage("theta", |r| {
        let aug = ps.with_point(&unique_label(ps, ALPHA_NODE), ar.alpha_point)?;
        let pos = aug.positions();
        let gcfg = GammaConfig { step: Some(r.cfg.gamma.step.map_or_else(|| gamma_step(&pos), Ok)?), ..r.cfg.gamma };
        let trajs = gamma_trajectories_with(&pos, &gcfg)?;
        let (set, theta) = theta_paths(&pos, trajs)?;
        let mst = nl_mst(&theta, &set);
        let tm = theta_map(ps, &mst, &br, &window)?;
        let mut w = Vec::new();
        write_grid(r, &tm, "theta.asc", &mut w)?;
        r.warnings.extend(w);
        if !all {
            return Ok(((aug, theta, mst), vec!["theta.asc"]));
        }
        let ids = aug.ids();
        let feats: Vec<Feature> = mst
            .edges
            .iter()
            .map(|e| {
                Feature::line(e.path.samples.iter().map(|p| loaded.to_output(*p)).collect())
                    .with("from", ids[e.a].clone())
                    .with("to", ids[e.b].clone())
                    .with("theta", e.weight)
            })
            .collect();
        write_geojson(&feats, loaded.planar_output(), r.path("mst.geojson"))?;
        write_matrix(&theta, &ids, r.path("theta.csv"))?;
        Ok(((aug, theta, mst), vec!["theta.asc", "mst.geojson", "theta.csv"]))
    })?;
    if !all {
        return run.finish();
    }

    let attractors = run.stage("dynamics", |r| {
        let ids = aug.ids();
        let tm = transition_matrix(&theta, &ids)?;
        write_text(r.path("transition.csv"), &tm_csv(&tm))?;
        let g = g_in_out(&tm);
        write_text(r.path("ginout.csv"), &g.to_csv())?;
        write_text(r.path("ginout.dot"), &g.to_dot())?;
        let rep = dtmc_simulate(&tm, &r.cfg.dtmc)?;
        write_text(r.path("chains.csv"), &rep.to_csv())?;
        let att: Vec<serde_json::Value> = rep
            .basins
            .iter()
            .map(|b| json!({"a": ids[b.attractor.0], "b": ids[b.attractor.1], "starts": b.starts.len(), "share": b.share}))
            .collect();
        Ok((att, vec!["transition.csv", "ginout.csv", "ginout.dot", "chains.csv"]))
    })?;

    run.stage("summary", |r| {
        let alpha_node = aug.len() - 1;
        let ids = aug.ids();
        let geo = loaded.source_crs == Crs::Wgs84Degrees;
        let pj = |p: Point2| {
            let q = loaded.to_output(p);
            if geo { json!({"lon": q.x, "lat": q.y}) } else { point_json(q) }
        };
        let s = json!({
            "dataset": ps.name(),
            "n": ps.len(),
            "crs": loaded.source_crs,
            "alpha_point": pj(ar.alpha_point),
            "alpha_star": ar.alpha_star,
            "alpha_bracketed": ar.bracketed,
            "beta_star": br.beta_star,
            "stwc_at_beta_star": pj(br.stwc_at_star),
            "alpha_histogram": histogram.iter().map(|(lo, p)| json!({"from": lo, "probability": p})).collect::<Vec<_>>(),
            "mst_weight": mst.total_weight,
            "mst_alpha_neighbours": mst.neighbours(alpha_node).iter().map(|&k| ids[k].clone()).collect::<Vec<_>>(),
            "attractors": attractors,
            "warnings": r.warnings,
        });
        write_text(r.path("summary.json"), &(serde_json::to_string_pretty(&s).expect("json") + "\n"))?;
        Ok(((), vec!["summary.json"]))
    })?;
    run.finish()
}

/// Meta-distance recursion, projection, vanishing points, memberships and meta-cluster field.
pub fn cmd_metadist(cfg: &RunConfig) -> Result<(), StageError> {
    metadist(cfg, true, "metadist")
}

fn metadist(cfg: &RunConfig, all: bool, command: &'static str) -> Result<(), StageError> {
    let mut run = Run::new(cfg, command)?;
    let loaded = run.stage("load", |r| {
        let mut w = Vec::new();
        let l = load(r.cfg, &mut w)?;
        r.warnings.extend(w);
        Ok((l, vec![]))
    })?;
    let ps = &loaded.ps;
    let d = loaded.matrix.clone().unwrap_or_else(|| crate::dataset::euclidean_matrix(ps));
    let trace = run.stage("meta-distance", |r| {
        let tr = meta_distance_trace(&d, &r.cfg.meta)?;
        let mut files = vec![];
        if all {
            let mut csv = String::from("t,S,delta_S,J,delta_m\n");
            for it in &tr.iterations {
                let _ = writeln!(csv, "{},{},{},{},{}", it.t, it.s, it.delta_s, it.j, it.delta_m);
            }
            write_text(r.path("trace.csv"), &csv)?;
            files.push("trace.csv");
        }
        if !tr.converged {
            return Err(TwcError::NotConverged { iterations: r.cfg.meta.max_iterations });
        }
        Ok((tr, files))
    })?;
    let t_star = trace.optimal_at;
    run.stage("projection", |r| {
        let proj = mds_project(&trace.rescaled_at(t_star), ps)?;
        let vp = vanishing_points(&proj, &trace.matrix_at(t_star));
        r.warnings.extend(vp.warnings.iter().cloned());
        let mut frame: Vec<Point2> = ps.positions();
        frame.extend(&proj.projected);
        let window = GridWindow::around(&frame, r.cfg.grid_rows, r.cfg.grid_cols, r.cfg.margin)?;
        let field = metacluster_field(&proj, &window);
        write_field(&field, r.path("metacluster.asc"))?;
        if !all {
            return Ok(((), vec!["metacluster.asc"]));
        }
        let ids = ps.ids();
        let feats: Vec<Feature> = proj
            .projected
            .iter()
            .enumerate()
            .map(|(k, p)| {
                let src = loaded.to_output(ps.points()[k].pos);
                Feature::point(loaded.to_output(*p))
                    .with("id", ids[k].clone())
                    .with("cluster", vp.labels[k])
                    .with("source", json!([src.x, src.y]))
            })
            .collect();
        write_geojson(&feats, loaded.planar_output(), r.path("projection.geojson"))?;
        let hull = crate::geometry::convex_hull(&ps.positions());
        let scale = crate::dataset::euclidean_matrix(ps).max_d();
        let feats: Vec<Feature> = vp
            .clusters
            .iter()
            .enumerate()
            .map(|(k, c)| {
                Feature::point(loaded.to_output(c.centroid))
                    .with("cluster", k)
                    .with("members", c.members.iter().map(|&i| ids[i].clone()).collect::<Vec<_>>())
                    .with("inside_hull", crate::geometry::in_convex_hull(&hull, c.centroid, 1e-9 * scale))
            })
            .collect();
        write_geojson(&feats, loaded.planar_output(), r.path("vanishing_points.geojson"))?;
        let mut csv = String::from("id,cluster");
        for k in 0..vp.clusters.len() {
            let _ = write!(csv, ",mu_{k}");
        }
        csv.push('\n');
        for (i, id) in ids.iter().enumerate() {
            let _ = write!(csv, "{id},{}", vp.labels[i]);
            for mu in &vp.memberships[i] {
                let _ = write!(csv, ",{mu}");
            }
            csv.push('\n');
        }
        write_text(r.path("memberships.csv"), &csv)?;
        let s = json!({
            "n": ps.len(),
            "iterations": trace.converged_at,
            "optimal_iteration": t_star,
            "stress": proj.stress,
            "clusters": vp.clusters.iter().map(|c| json!({
                "vanishing_point": point_json(loaded.to_output(c.centroid)),
                "members": c.members.iter().map(|&i| ids[i].clone()).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "warnings": r.warnings,
        });
        write_text(r.path("summary.json"), &(serde_json::to_string_pretty(&s).expect("json") + "\n"))?;
        Ok(((), vec!["metacluster.asc", "projection.geojson", "vanishing_points.geojson", "memberships.csv", "summary.json"]))
    })?;
    run.finish()
}

/// Leave-one-out outbreak candidates.
pub fn cmd_loo(cfg: &RunConfig) -> Result<(), StageError> {
    let mut run = Run::new(cfg, "loo")?;
    let loaded = run.stage("load", |r| {
        let mut w = Vec::new();
        let l = load(r.cfg, &mut w)?;
        r.warnings.extend(w);
        Ok((l, vec![]))
    })?;
    run.stage("loo", |r| {
        let rep = loo_alpha_with(&loaded.ps, &r.cfg.sweep)?;
        let unbracketed = rep.folds.iter().filter(|f| !f.bracketed).count();
        if unbracketed > 0 {
            r.warnings.push(format!("{unbracketed} folds took the alpha point at the scan boundary"));
        }
        let mut cluster_of = vec![0; rep.folds.len()];
        for (k, c) in rep.candidates.iter().enumerate() {
            c.folds.iter().for_each(|&f| cluster_of[f] = k);
        }
        let mut csv = String::from("excluded_id,x,y,alpha_star,cluster\n");
        for (k, f) in rep.folds.iter().enumerate() {
            let p = loaded.to_output(f.alpha_point);
            let _ = writeln!(csv, "{},{},{},{},{}", f.excluded_id, p.x, p.y, f.alpha_star, cluster_of[k]);
        }
        write_text(r.path("loo.csv"), &csv)?;
        let feats: Vec<Feature> = rep
            .candidates
            .iter()
            .enumerate()
            .map(|(k, c)| {
                Feature::point(loaded.to_output(c.centroid))
                    .with("cluster", k)
                    .with("share", c.share)
                    .with("excluded", c.folds.iter().map(|&f| rep.folds[f].excluded_id.clone()).collect::<Vec<_>>())
            })
            .collect();
        write_geojson(&feats, loaded.planar_output(), r.path("candidates.geojson"))?;
        let s = json!({
            "n": loaded.ps.len(),
            "cutoff": rep.cutoff,
            "candidates": rep.candidates.iter().map(|c| json!({
                "centroid": point_json(loaded.to_output(c.centroid)),
                "share": c.share,
            })).collect::<Vec<_>>(),
            "warnings": r.warnings,
        });
        write_text(r.path("summary.json"), &(serde_json::to_string_pretty(&s).expect("json") + "\n"))?;
        Ok(((), vec!["loo.csv", "candidates.geojson", "summary.json"]))
    })?;
    run.finish()
}
