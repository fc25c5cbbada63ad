//! Multiplicative-weights embedding of an expander `H` into `G`.
//!
//! Rounds `i = 0, 1, …, ⌊log₂(1/b)⌋` scan the still-unembedded `H`-edges in
//! ascending id order. An edge whose endpoints are within `2^i·C·α` under the
//! current weights is routed along the oracle's path, and every edge `f` on
//! that path is reweighted `w_f ← (1+η)·w_f`. A round that leaves more than
//! `Δ·n/2^i` edges unembedded ends the run with those far-apart pairs;
//! otherwise the surviving embedding is the certificate.
//!
//! `Δ` is `max(10, max degree of G)`, so the thresholds reduce to the
//! classical `10n/2^i` on graphs of degree at most 10.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::apsp::ApspOracle;
use crate::error::{invalid, Error, Result};
use crate::graph::{EdgeId, EdgeWeights, Graph};

/// Degree bound the thresholds are calibrated for.
pub const BASE_DEGREE_BOUND: usize = 10;

/// Parameters of one embedding run.
///
/// `eta = 1/(4·C·α·log₂(10/b))` uses a base-2 logarithm; the congestion bound
/// [`MwuConfig::congestion_bound`] uses the natural logarithm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MwuConfig {
    pub c: f64,
    pub b: f64,
    pub alpha: f64,
    pub eta: f64,
    pub degree_bound: usize,
}

impl MwuConfig {
    pub fn new(g: &Graph, c: f64, b: f64, alpha: f64) -> Result<Self> {
        let n = g.n() as f64;
        if !(c >= 1.0) || !c.is_finite() {
            return invalid(format!("congestion parameter C = {c} must be at least 1"));
        }
        if !(b >= 1.0 / n - 1e-12 && b <= 0.5) {
            return invalid(format!("balance b = {b} outside [1/n, 1/2] for n = {}", g.n()));
        }
        if !(alpha >= 1.0) {
            return invalid(format!("approximation factor {alpha} below 1"));
        }
        let eta = 1.0 / (4.0 * c * alpha * (10.0 / b).log2());
        Ok(MwuConfig {
            c,
            b,
            alpha,
            eta,
            degree_bound: g.max_degree().max(BASE_DEGREE_BOUND),
        })
    }

    /// Index of the last round, `⌊log₂(1/b)⌋`.
    pub fn last_round(&self) -> usize {
        let mut i = 0;
        while 2f64.powi(i as i32 + 1) * self.b <= 1.0 + 1e-12 {
            i += 1;
        }
        i
    }

    /// Right-hand side of the weight-sum invariant after round `i`:
    /// `Δ·n·(1 + 2ηCα(i+1))`.
    pub fn weight_sum_bound(&self, n: usize, round: usize) -> f64 {
        (self.degree_bound * n) as f64 * (1.0 + 2.0 * self.eta * self.c * self.alpha * (round + 1) as f64)
    }

    /// `2·ln(2Cα/b)/η`.
    pub fn congestion_bound(&self) -> f64 {
        2.0 * (2.0 * self.c * self.alpha / self.b).ln() / self.eta
    }

    /// Maximum number of missing `H`-edges in a certificate, `Δ·b·n`.
    pub fn missing_bound(&self, n: usize) -> f64 {
        self.degree_bound as f64 * self.b * n as f64
    }
}

/// Paths in `G` for a subset of `H`-edges, with per-edge usage counts.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Embedding {
    paths: BTreeMap<EdgeId, Vec<EdgeId>>,
    usage: Vec<usize>,
}

impl Embedding {
    pub fn new(host_edges: usize) -> Self {
        Embedding {
            paths: BTreeMap::new(),
            usage: vec![0; host_edges],
        }
    }

    pub fn insert(&mut self, h_edge: EdgeId, path: Vec<EdgeId>) {
        for &f in &path {
            self.usage[f] += 1;
        }
        if let Some(old) = self.paths.insert(h_edge, path) {
            for f in old {
                self.usage[f] -= 1;
            }
        }
    }

    pub fn path(&self, h_edge: EdgeId) -> Option<&[EdgeId]> {
        self.paths.get(&h_edge).map(Vec::as_slice)
    }

    /// `(H-edge, path)` in ascending `H`-edge order.
    pub fn paths(&self) -> impl Iterator<Item = (EdgeId, &[EdgeId])> {
        self.paths.iter().map(|(&e, p)| (e, p.as_slice()))
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn usage(&self) -> &[usize] {
        &self.usage
    }

    pub fn congestion(&self) -> usize {
        congestion(self)
    }
}

/// Maximum number of embedding paths through a single edge of `G`.
pub fn congestion(pi: &Embedding) -> usize {
    pi.usage.iter().copied().max().unwrap_or(0)
}

#[derive(Debug, Clone, PartialEq)]
pub enum EmbedResult {
    /// More than `Δ·b′·n` pairs of `H` are at weighted distance above `C/b′`.
    Separation {
        weights: EdgeWeights,
        b_prime: f64,
        round: usize,
        far_edges: Vec<EdgeId>,
    },
    /// All but `missing` edges of `H` are embedded.
    Certificate {
        h_prime: Vec<EdgeId>,
        missing: Vec<EdgeId>,
        embedding: Embedding,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoundTrace {
    pub round: usize,
    pub weight_sum: f64,
    pub weight_sum_bound: f64,
    pub remaining: usize,
    pub embedded_this_round: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbedRun {
    pub result: EmbedResult,
    pub config: MwuConfig,
    pub trace: Vec<RoundTrace>,
}

impl EmbedRun {
    /// Rounds whose weight sum exceeded the invariant, with relative slack `1e-9`.
    pub fn weight_sum_violations(&self) -> Vec<RoundTrace> {
        self.trace
            .iter()
            .filter(|t| t.weight_sum > t.weight_sum_bound * (1.0 + 1e-9))
            .copied()
            .collect()
    }
}

/// Embeds `h` into `g` or separates many of its edges.
///
/// `oracle` must be freshly initialized on `g` with all-ones weights; on
/// return its weights equal the run's final weights.
pub fn separate_or_certify(
    g: &Graph,
    h: &Graph,
    c: f64,
    b: f64,
    oracle: &mut dyn ApspOracle,
) -> Result<EmbedRun> {
    if g.n() != h.n() {
        return invalid(format!("G has {} vertices but H has {}", g.n(), h.n()));
    }
    if oracle.weights().values().iter().any(|&w| w != 1.0) || oracle.weights().len() != g.m() {
        return invalid("oracle must start from all-ones weights on G");
    }
    let config = MwuConfig::new(g, c, b, oracle.alpha())?;
    let n = g.n();
    let eta = config.eta;
    let mut weights = EdgeWeights::ones(g.m());
    let mut embedding = Embedding::new(g.m());
    let mut remaining: Vec<EdgeId> = (0..h.m()).collect();
    let mut trace = Vec::new();
    // the invariant's proof needs |E(H)| <= 2Δn
    let invariant_applies = h.m() <= 2 * config.degree_bound * n;

    for round in 0..=config.last_round() {
        let threshold = 2f64.powi(round as i32) * config.c * config.alpha;
        let mut unrouted = Vec::new();
        let mut embedded_this_round = 0;
        for &e in &remaining {
            let (u, v) = h.edge(e);
            let close = matches!(oracle.query_distance(u, v), Some(d) if d <= threshold);
            if !close {
                unrouted.push(e);
                continue;
            }
            let path = oracle
                .query_path(u, v)
                .ok_or_else(|| Error::Invariant(format!("oracle lost the path for H-edge {e}")))?;
            for &f in &path {
                let delta = eta * weights.get(f);
                oracle.increase_edge_weight(f, delta)?;
                weights.add(f, delta);
            }
            embedding.insert(e, path);
            embedded_this_round += 1;
        }
        remaining = unrouted;

        let weight_sum = weights.l1();
        let entry = RoundTrace {
            round,
            weight_sum,
            weight_sum_bound: config.weight_sum_bound(n, round),
            remaining: remaining.len(),
            embedded_this_round,
        };
        debug_assert!(
            !invariant_applies || entry.weight_sum <= entry.weight_sum_bound * (1.0 + 1e-9),
            "weight-sum invariant violated: {entry:?}"
        );
        trace.push(entry);

        let limit = (config.degree_bound * n) as f64 / 2f64.powi(round as i32);
        if remaining.len() as f64 > limit {
            debug_assert!(weights_agree(&weights, oracle.weights()));
            return Ok(EmbedRun {
                result: EmbedResult::Separation {
                    weights,
                    b_prime: 0.5f64.powi(round as i32),
                    round,
                    far_edges: remaining,
                },
                config,
                trace,
            });
        }
    }
    debug_assert!(weights_agree(&weights, oracle.weights()));
    let h_prime = embedding.paths().map(|(e, _)| e).collect();
    Ok(EmbedRun {
        result: EmbedResult::Certificate {
            h_prime,
            missing: remaining,
            embedding,
        },
        config,
        trace,
    })
}

fn weights_agree(mirror: &EdgeWeights, oracle: &EdgeWeights) -> bool {
    mirror
        .values()
        .iter()
        .zip(oracle.values())
        .all(|(a, b)| (a - b).abs() <= 1e-9 * a.abs().max(b.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::apsp::DijkstraOracle;
    use crate::expander::{default_k, rand_log_expander};
    use crate::gen::{complete_graph, disjoint_union};
    use crate::verify::{check_embedding, reference_distance};

    fn run(g: &Graph, h: &Graph, c: f64, b: f64) -> (EmbedRun, EdgeWeights) {
        let mut oracle = DijkstraOracle::new(g, EdgeWeights::ones(g.m())).unwrap();
        let r = separate_or_certify(g, h, c, b, &mut oracle).unwrap();
        let w = oracle.weights().clone();
        (r, w)
    }

    #[test]
    fn config_values() {
        let g = complete_graph(16);
        let cfg = MwuConfig::new(&g, 4.0, 0.25, 1.0).unwrap();
        assert_eq!(cfg.eta, 1.0 / (16.0 * 40f64.log2()));
        assert_eq!(cfg.last_round(), 2);
        assert_eq!(cfg.degree_bound, 15);
        assert_eq!(MwuConfig::new(&g, 4.0, 1.0 / 16.0, 1.0).unwrap().last_round(), 4);
        assert_eq!(MwuConfig::new(&g, 4.0, 0.3, 1.0).unwrap().last_round(), 1);
        assert!(MwuConfig::new(&g, 0.5, 0.25, 1.0).is_err());
        assert!(MwuConfig::new(&g, 4.0, 0.6, 1.0).is_err());
        assert!(MwuConfig::new(&g, 4.0, 0.01, 1.0).is_err());
    }

    #[test]
    fn empty_h_gives_empty_certificate() {
        let g = complete_graph(4);
        let (r, _) = run(&g, &Graph::new(4), 4.0, 0.25);
        match r.result {
            EmbedResult::Certificate { h_prime, missing, embedding } => {
                assert!(h_prime.is_empty() && missing.is_empty());
                assert_eq!(congestion(&embedding), 0);
            }
            other => panic!("expected certificate, got {other:?}"),
        }
    }

    #[test]
    fn k4_into_itself() {
        let k4 = complete_graph(4);
        let (r, _) = run(&k4, &k4, 4.0, 0.25);
        match r.result {
            EmbedResult::Certificate { h_prime, missing, embedding } => {
                assert_eq!(h_prime, (0..6).collect::<Vec<_>>());
                assert!(missing.is_empty());
                for e in 0..6 {
                    assert_eq!(embedding.path(e), Some(&[e][..]));
                }
                let report = check_embedding(&k4, &k4, &h_prime, &embedding);
                assert!(report.is_clean());
                assert_eq!(report.congestion, 1);
                assert_eq!(congestion(&embedding), 1);
            }
            other => panic!("expected certificate, got {other:?}"),
        }
        assert_eq!(r.trace.len(), 3);
        assert_eq!(r.trace[0].embedded_this_round, 6);
    }

    #[test]
    fn congestion_of_shared_paths() {
        let mut pi = Embedding::new(3);
        assert_eq!(congestion(&pi), 0);
        pi.insert(0, vec![0, 1]);
        pi.insert(1, vec![1, 2]);
        assert_eq!(congestion(&pi), 2);
        assert_eq!(pi.usage(), &[1, 2, 1]);
        pi.insert(1, vec![2]);
        assert_eq!(congestion(&pi), 1);
    }

    fn two_k8_with_bridge() -> Graph {
        let mut g = disjoint_union(&complete_graph(8), &complete_graph(8));
        g.add_edge(7, 8).unwrap();
        g
    }

    #[test]
    fn bridged_cliques_with_huge_c_are_certified() {
        // C = 320·ln16/0.05 ≈ 17744 while every G-distance stays below 15·(1+η)^|E(H)|
        // ≈ 15.2, so every H-edge is accepted in round 0.
        let g = two_k8_with_bridge();
        let h = rand_log_expander(16, default_k(16), 1).unwrap();
        let c = 320.0 * 16f64.ln() / 0.05;
        let (r, _) = run(&g, &h, c, 0.25);
        match &r.result {
            EmbedResult::Certificate { missing, embedding, .. } => {
                assert!(missing.is_empty());
                assert_eq!(embedding.len(), h.m());
                let crossing = h.edges().iter().filter(|&&(u, v)| (u < 8) != (v < 8)).count();
                assert_eq!(embedding.usage()[g.m() - 1], crossing);
            }
            _ => panic!("expected certificate"),
        }
    }

    #[test]
    fn bridged_cliques_separate_across_the_bridge() {
        let g = two_k8_with_bridge();
        let h = rand_log_expander(16, default_k(16), 1).unwrap();
        let c = 4.0;
        let (r, oracle_w) = run(&g, &h, c, 0.25);
        match &r.result {
            EmbedResult::Separation { weights, b_prime, far_edges, .. } => {
                assert_eq!(weights, &oracle_w);
                assert!(far_edges.len() as f64 > r.config.degree_bound as f64 * b_prime * 16.0);
                for &e in far_edges {
                    let (u, v) = h.edge(e);
                    assert!((u < 8) != (v < 8), "F-edge {e} = ({u},{v}) does not straddle");
                    let d = reference_distance(&g, weights.values(), u, v);
                    assert!(d > c / b_prime, "dist {d} <= C/b' = {}", c / b_prime);
                }
            }
            _ => panic!("expected separation"),
        }
    }
}
