//! Theta-based transition probabilities, the G IN-OUT digraph, and Markov-chain
//! attractor analysis.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::DistanceMatrix;
use crate::error::{Result, TwcError};

#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    pub labels: Vec<String>,
    /// Row-major, rows sum to 1.
    pub p: Vec<f64>,
}

impl TransitionMatrix {
    /// Validate and take ownership of a row-stochastic matrix.
    pub fn new(labels: Vec<String>, p: Vec<f64>) -> Result<Self> {
        let n = labels.len();
        if p.len() != n * n {
            return Err(TwcError::Invalid(format!("{} entries for {n} nodes", p.len())));
        }
        if p.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(TwcError::Invalid("transition probabilities must be finite and nonnegative".into()));
        }
        for i in 0..n {
            let s: f64 = p[i * n..(i + 1) * n].iter().sum();
            if (s - 1.0).abs() > 1e-9 {
                return Err(TwcError::Invalid(format!("row {} sums to {s}", labels[i])));
            }
        }
        Ok(Self { labels, p })
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.p[i * self.n() + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.n();
        &self.p[i * n..(i + 1) * n]
    }

    /// Same chain with nodes reordered: new node k is old node `order[k]`.
    pub fn permuted(&self, order: &[usize]) -> TransitionMatrix {
        let n = self.n();
        let p = (0..n * n).map(|k| self.get(order[k / n], order[k % n])).collect();
        TransitionMatrix { labels: order.iter().map(|&o| self.labels[o].clone()).collect(), p }
    }
}

/// p_ij ∝ 1 − θ_ij / max θ off the diagonal, with self-affinity 1.
pub fn transition_matrix(theta: &DistanceMatrix, labels: &[String]) -> Result<TransitionMatrix> {
    let n = theta.n();
    if labels.len() != n {
        return Err(TwcError::Invalid(format!("{} labels for {n} nodes", labels.len())));
    }
    let mx = theta.max_d();
    if mx <= 0.0 {
        return Err(TwcError::DegenerateDataset("all theta distances are zero".into()));
    }
    let mut p = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            p[i * n + j] = if i == j { 1.0 } else { 1.0 - theta.get(i, j) / mx };
        }
        let s: f64 = p[i * n..(i + 1) * n].iter().sum();
        p[i * n..(i + 1) * n].iter_mut().for_each(|v| *v /= s);
    }
    Ok(TransitionMatrix { labels: labels.to_vec(), p })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightedDigraph {
    pub labels: Vec<String>,
    /// (from, to, weight)
    pub edges: Vec<(usize, usize, f64)>,
}

impl WeightedDigraph {
    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.edges.iter().any(|&(a, b, _)| a == from && b == to)
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph g_in_out {\n");
        for (k, l) in self.labels.iter().enumerate() {
            let _ = writeln!(s, "  n{k} [label=\"{}\"];", l.replace('"', "\\\""));
        }
        for (a, b, w) in &self.edges {
            let _ = writeln!(s, "  n{a} -> n{b} [weight={w:.6}, label=\"{w:.4}\"];");
        }
        s.push_str("}\n");
        s
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("from,to,weight\n");
        for (a, b, w) in &self.edges {
            let _ = writeln!(s, "{},{},{w}", csv_field(&self.labels[*a]), csv_field(&self.labels[*b]));
        }
        s
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Keep i→j where p_ij exceeds the uniform baseline 1/n.
pub fn g_in_out(tm: &TransitionMatrix) -> WeightedDigraph {
    let n = tm.n();
    let base = 1.0 / n as f64;
    let edges = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| i != j && tm.get(i, j) > base)
        .map(|(i, j)| (i, j, tm.get(i, j)))
        .collect();
    WeightedDigraph { labels: tm.labels.clone(), edges }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DtmcConfig {
    pub runs: usize,
    pub seed: u64,
    /// Follow the most probable transition instead of sampling.
    pub argmax: bool,
    pub max_steps: usize,
}

impl Default for DtmcConfig {
    fn default() -> Self {
        Self { runs: 10_000, seed: 0, argmax: false, max_steps: 64 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StartReport {
    pub start: usize,
    /// Prototypical chain, starting at `start`.
    pub chain: Vec<usize>,
    /// The 2-cycle the chain ends in, lower label first.
    pub attractor: Option<(usize, usize)>,
    /// Fraction of this start's simulated chains ending in the same attractor.
    pub frequency: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Basin {
    pub attractor: (usize, usize),
    pub starts: Vec<usize>,
    /// starts.len() / node count.
    pub share: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainReport {
    pub labels: Vec<String>,
    pub starts: Vec<StartReport>,
    /// Largest basin first.
    pub basins: Vec<Basin>,
    pub runs_per_start: usize,
}

impl ChainReport {
    pub fn dominant(&self) -> Option<&Basin> {
        self.basins.first()
    }

    pub fn attractor_labels(&self, a: (usize, usize)) -> (String, String) {
        (self.labels[a.0].clone(), self.labels[a.1].clone())
    }

    /// CSV: start, chain, attractor, frequency.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("start,chain,attractor,frequency\n");
        for r in &self.starts {
            let chain: Vec<&str> = r.chain.iter().map(|&k| self.labels[k].as_str()).collect();
            let att = r.attractor.map_or(String::new(), |(a, b)| format!("{}<->{}", self.labels[a], self.labels[b]));
            let _ = writeln!(
                s,
                "{},{},{},{:.6}",
                csv_field(&self.labels[r.start]),
                csv_field(&chain.join(" -> ")),
                csv_field(&att),
                r.frequency
            );
        }
        s
    }
}

/// Walk from `start` with `next` until a 2-cycle closes or the step cap is hit.
fn walk(start: usize, max_steps: usize, mut next: impl FnMut(usize) -> Result<usize>) -> Result<Vec<usize>> {
    let mut chain = vec![start];
    while chain.len() <= max_steps {
        let k = chain.len();
        if k >= 3 && chain[k - 1] == chain[k - 3] {
            break;
        }
        chain.push(next(chain[k - 1])?);
    }
    Ok(chain)
}

fn attractor_of(chain: &[usize], rank: &[usize]) -> Option<(usize, usize)> {
    let k = chain.len();
    (k >= 3 && chain[k - 1] == chain[k - 3]).then(|| {
        let (a, b) = (chain[k - 1], chain[k - 2]);
        if rank[a] <= rank[b] {
            (a, b)
        } else {
            (b, a)
        }
    })
}

/// Argmax over `order` (canonical), skipping `skip`; first wins ties.
fn argmax_in(order: &[usize], skip: usize, score: impl Fn(usize) -> f64) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for &j in order {
        if j == skip {
            continue;
        }
        let s = score(j);
        if best.is_none_or(|(_, b)| s > b) {
            best = Some((j, s));
        }
    }
    best.map(|(j, _)| j)
}

/// Simulate chains from every node; self-transitions are excluded and their mass
/// renormalized away. Node order is canonicalized by label, so relabeling the
/// matrix permutes the report without changing it.
pub fn dtmc_simulate(tm: &TransitionMatrix, cfg: &DtmcConfig) -> Result<ChainReport> {
    let n = tm.n();
    if n < 2 {
        return Err(TwcError::DatasetTooSmall { n, min: 2 });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| tm.labels[a].cmp(&tm.labels[b]).then(a.cmp(&b)));
    let mut rank = vec![0; n];
    order.iter().enumerate().for_each(|(r, &k)| rank[k] = r);
    for i in 0..n {
        if (0..n).all(|j| j == i || tm.get(i, j) <= 0.0) {
            return Err(TwcError::AbsorbingState(tm.labels[i].clone()));
        }
    }
    let runs_per_start = if cfg.argmax { 1 } else { (cfg.runs / n).max(1) };
    let tm_argmax = |cur: usize| Ok(argmax_in(&order, cur, |j| tm.get(cur, j)).expect("n >= 2"));

    let mut counts = vec![0u64; n * n];
    let mut ends: Vec<BTreeMap<Option<(usize, usize)>, usize>> = vec![BTreeMap::new(); n];
    if !cfg.argmax {
        for (c, &s) in order.iter().enumerate() {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(c as u64);
            for _ in 0..runs_per_start {
                let chain = walk(s, cfg.max_steps, |cur| {
                    let total: f64 = order.iter().filter(|&&j| j != cur).map(|&j| tm.get(cur, j)).sum();
                    let u = rng.random::<f64>() * total;
                    let mut acc = 0.0;
                    let mut pick = None;
                    for &j in order.iter().filter(|&&j| j != cur) {
                        let pj = tm.get(cur, j);
                        if pj <= 0.0 {
                            continue;
                        }
                        acc += pj;
                        pick = Some(j);
                        if u < acc {
                            break;
                        }
                    }
                    Ok(pick.expect("row has off-diagonal mass"))
                })?;
                chain.windows(2).for_each(|w| counts[w[0] * n + w[1]] += 1);
                *ends[s].entry(attractor_of(&chain, &rank)).or_default() += 1;
            }
        }
    }

    let mut starts = Vec::with_capacity(n);
    for &s in &order {
        let chain = if cfg.argmax {
            walk(s, cfg.max_steps, tm_argmax)?
        } else {
            walk(s, cfg.max_steps, |cur| {
                if (0..n).any(|j| j != cur && counts[cur * n + j] > 0) {
                    Ok(argmax_in(&order, cur, |j| counts[cur * n + j] as f64).expect("n >= 2"))
                } else {
                    tm_argmax(cur)
                }
            })?
        };
        let attractor = attractor_of(&chain, &rank);
        let frequency = if cfg.argmax {
            1.0
        } else {
            ends[s].get(&attractor).copied().unwrap_or(0) as f64 / runs_per_start as f64
        };
        starts.push(StartReport { start: s, chain, attractor, frequency });
    }

    let mut by_attractor: Vec<Basin> = Vec::new();
    for r in &starts {
        let Some(a) = r.attractor else { continue };
        match by_attractor.iter_mut().find(|b| b.attractor == a) {
            Some(b) => b.starts.push(r.start),
            None => by_attractor.push(Basin { attractor: a, starts: vec![r.start], share: 0.0 }),
        }
    }
    for b in &mut by_attractor {
        b.share = b.starts.len() as f64 / n as f64;
    }
    by_attractor.sort_by(|a, b| {
        b.starts.len().cmp(&a.starts.len()).then(rank[a.attractor.0].cmp(&rank[b.attractor.0])).then(rank[a.attractor.1].cmp(&rank[b.attractor.1]))
    });
    Ok(ChainReport { labels: tm.labels.clone(), starts, basins: by_attractor, runs_per_start })
}
