//! Conductance via sparsity, and the self-loop padding.
//!
//! Every vertex `v` of `G` is blown up into a gadget `X_v` of `deg(v)` port
//! vertices wired as an expander; each edge of `G` joins one port at each
//! endpoint. For `S ⊆ V(G)` the union `X_S` of its gadgets has exactly
//! `vol_G(S)` vertices and the same crossing edges, so sparsity in `Ĝ`
//! tracks conductance in `G`. Cuts found in `Ĝ` come back by majority vote.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::apsp::OracleFactory;
use crate::cut_extract::{sparse_cut_or_certify, CutOrCert, SparseCutConfig, SparseCutRun};
use crate::error::{invalid, Error, Result};
use crate::expander::{mgg_expander, rand_log_expander, spectral_lower_bound};
use crate::gen::complete_graph;
use crate::graph::{boundary_size, conductance, sparsity, Cut, EdgeId, Graph, VertexId};
use crate::verify::{exact_sparsest_cut, EXHAUSTIVE_LIMIT};

/// Gadgets up to this size are complete graphs.
pub const COMPLETE_GADGET_LIMIT: usize = 10;
/// Samples per vertex for large non-square gadgets.
pub const GADGET_SAMPLES: usize = 4;
/// Minimum certified sparsity of a sampled gadget.
pub const GADGET_PSI_TARGET: f64 = 0.5;
const GADGET_SEED_TRIES: u64 = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum GadgetKind {
    Empty,
    Complete,
    Mgg { side: usize },
    Sampled { seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gadget {
    pub kind: GadgetKind,
    /// Certified lower bound on the gadget's sparsity; `None` for fewer
    /// than two ports.
    pub psi: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GadgetMap {
    /// First port of each original vertex; `X_v = start[v]..start[v+1]`.
    start: Vec<usize>,
    /// `Ĝ`-vertex → original vertex.
    owner: Vec<VertexId>,
    /// Gadget per original vertex.
    pub gadgets: Vec<Gadget>,
}

impl GadgetMap {
    pub fn ports(&self, v: VertexId) -> std::ops::Range<usize> {
        self.start[v]..self.start[v + 1]
    }

    pub fn owner(&self, x: usize) -> VertexId {
        self.owner[x]
    }

    /// `Ĝ` edge id of original edge `e`.
    pub fn edge(&self, e: EdgeId) -> EdgeId {
        e
    }

    /// Smallest certified gadget sparsity, `1` if no gadget has two ports.
    pub fn psi0(&self) -> f64 {
        self.gadgets
            .iter()
            .filter_map(|g| g.psi)
            .fold(None, |acc: Option<f64>, p| Some(acc.map_or(p, |a| a.min(p))))
            .unwrap_or(1.0)
    }

    /// `X_S`.
    pub fn lift(&self, s: &Cut) -> Cut {
        Cut::from_membership(self.owner.iter().map(|&v| s.contains(v)).collect())
    }
}

fn certified_psi(h: &Graph) -> Result<f64> {
    if h.n() <= EXHAUSTIVE_LIMIT {
        return Ok(exact_sparsest_cut(h)?.1);
    }
    let min_degree = (0..h.n()).map(|v| h.degree(v)).min().unwrap_or(0) as f64;
    Ok(spectral_lower_bound(h)? * min_degree / 2.0)
}

fn build_gadget(d: usize) -> Result<(Graph, Gadget)> {
    if d <= 1 {
        return Ok((Graph::new(d), Gadget { kind: GadgetKind::Empty, psi: None }));
    }
    if d <= COMPLETE_GADGET_LIMIT {
        // min over |S| <= d/2 of (d − |S|)
        let psi = (d - d / 2) as f64;
        return Ok((complete_graph(d), Gadget { kind: GadgetKind::Complete, psi: Some(psi) }));
    }
    let side = (d as f64).sqrt().round() as usize;
    if side * side == d {
        let h = mgg_expander(side)?;
        let psi = certified_psi(&h)?;
        return Ok((h, Gadget { kind: GadgetKind::Mgg { side }, psi: Some(psi) }));
    }
    for seed in 0..GADGET_SEED_TRIES {
        let h = rand_log_expander(d, GADGET_SAMPLES, seed)?;
        let psi = certified_psi(&h)?;
        if psi >= GADGET_PSI_TARGET {
            return Ok((h, Gadget { kind: GadgetKind::Sampled { seed }, psi: Some(psi) }));
        }
    }
    Err(Error::Invariant(format!("no gadget on {d} ports reached sparsity {GADGET_PSI_TARGET}")))
}

/// Builds `Ĝ`. Edge `e` of `G` keeps id `e` in `Ĝ`; gadget edges follow.
/// Ports are handed out in adjacency order, two consecutive ports per loop.
pub fn conductance_to_sparsity_graph(g: &Graph) -> Result<(Graph, GadgetMap)> {
    if g.m() == 0 {
        return invalid("graph has no edges");
    }
    let mut start = Vec::with_capacity(g.n() + 1);
    let mut owner = Vec::with_capacity(2 * g.m());
    let mut acc = 0;
    for v in 0..g.n() {
        start.push(acc);
        acc += g.degree(v);
        owner.extend(std::iter::repeat(v).take(g.degree(v)));
    }
    start.push(acc);

    let mut ends = vec![[usize::MAX; 2]; g.m()];
    for v in 0..g.n() {
        let mut port = start[v];
        for &(y, e) in g.neighbors(v) {
            let (a, _) = g.edge(e);
            if y == v {
                ends[e] = [port, port + 1];
                port += 2;
            } else {
                ends[e][usize::from(a != v)] = port;
                port += 1;
            }
        }
        debug_assert_eq!(port, start[v + 1]);
    }
    let mut ghat = Graph::new(acc);
    for [x, y] in ends {
        ghat.add_edge(x, y)?;
    }
    let mut cache: BTreeMap<usize, (Graph, Gadget)> = BTreeMap::new();
    let mut gadgets = Vec::with_capacity(g.n());
    for v in 0..g.n() {
        let d = g.degree(v);
        if !cache.contains_key(&d) {
            cache.insert(d, build_gadget(d)?);
        }
        let (h, gadget) = &cache[&d];
        for &(a, b) in h.edges() {
            ghat.add_edge(start[v] + a, start[v] + b)?;
        }
        gadgets.push(gadget.clone());
    }
    Ok((ghat, GadgetMap { start, owner, gadgets }))
}

/// Majority vote: `u ∈ S` iff `|X_u ∩ A| >= |X_u ∖ A|`.
pub fn transform_cut(g: &Graph, map: &GadgetMap, a: &Cut) -> Cut {
    Cut::from_membership(
        (0..g.n())
            .map(|u| {
                let inside = map.ports(u).filter(|&x| a.contains(x)).count();
                2 * inside >= map.ports(u).len()
            })
            .collect(),
    )
}

/// Numerical check of the two mapping claims for one cut `A` of `Ĝ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransformCheck {
    pub psi0: f64,
    pub crossing_g: usize,
    pub crossing_ghat: usize,
    /// `|E_G(S, S̄)| <= (1 + 1/ψ₀)·|E_Ĝ(A, Ā)|`.
    pub crossing_ok: bool,
    /// Whether `Ψ_Ĝ(A) <= ψ₀/2`, the hypothesis of the volume claim.
    pub volume_claim_applies: bool,
    /// `vol_G(S) >= |A|/2` and `vol_G(S̄) >= |Ā|/2`; vacuously true when the
    /// hypothesis fails.
    pub volume_ok: bool,
}

impl TransformCheck {
    pub fn holds(&self) -> bool {
        self.crossing_ok && self.volume_ok
    }
}

pub fn check_transform(g: &Graph, ghat: &Graph, map: &GadgetMap, a: &Cut, s: &Cut) -> TransformCheck {
    let psi0 = map.psi0();
    let crossing_g = boundary_size(g, s);
    let crossing_ghat = boundary_size(ghat, a);
    let crossing_ok = crossing_g as f64 <= (1.0 + 1.0 / psi0) * crossing_ghat as f64 * (1.0 + 1e-12);
    let volume_claim_applies = a.is_proper() && sparsity(ghat, a).map_or(false, |p| p <= psi0 / 2.0);
    let volume_ok = !volume_claim_applies || {
        let vol_s = s.volume(g);
        let vol_rest = g.volume() - vol_s;
        2 * vol_s >= a.size() && 2 * vol_rest >= a.complement_size()
    };
    TransformCheck {
        psi0,
        crossing_g,
        crossing_ghat,
        crossing_ok,
        volume_claim_applies,
        volume_ok,
    }
}

/// `G` with `⌈m/n⌉` self-loops added at every vertex.
pub fn add_self_loops(g: &Graph) -> Graph {
    let loops = if g.n() == 0 { 0 } else { g.m().div_ceil(g.n()) };
    let mut out = Graph::new(g.n());
    for &(u, v) in g.edges() {
        out.add_edge(u, v).expect("same vertex set");
    }
    for v in 0..g.n() {
        for _ in 0..loops {
            out.add_edge(v, v).expect("same vertex set");
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct ConductanceRun {
    /// Cut in `G` (with `psi_achieved` holding its conductance), or the
    /// certificate on `Ĝ` with balance measured as a volume fraction.
    pub outcome: CutOrCert,
    pub inner: SparseCutRun,
    pub ghat: Graph,
    pub map: GadgetMap,
    /// Present when a cut was mapped back.
    pub check: Option<TransformCheck>,
    /// `2(1 + 1/ψ₀)`: the mapped cut has conductance at most this times `φ`.
    pub c: f64,
}

pub fn low_conductance_cut_or_certify(
    g: &Graph,
    phi: f64,
    b: f64,
    seed: u64,
    c_factor: f64,
    factory: &dyn OracleFactory,
) -> Result<ConductanceRun> {
    let n = g.n();
    if n < 4 {
        return invalid(format!("need at least 4 vertices, got {n}"));
    }
    if !g.is_connected() {
        return invalid("graph is not connected");
    }
    if !(phi > 0.0 && phi <= 1.0) {
        return invalid(format!("phi = {phi} outside (0, 1]"));
    }
    if !(b >= 1.0 / n as f64 - 1e-12 && b <= 0.25) {
        return invalid(format!("balance b = {b} outside [1/n, 1/4]"));
    }
    let (ghat, map) = conductance_to_sparsity_graph(g)?;
    let mut config = SparseCutConfig::new(ghat.n(), phi, b, seed);
    config.c_factor = c_factor;
    let inner = sparse_cut_or_certify(&ghat, &config, factory)?;
    let psi0 = map.psi0();
    let c = 2.0 * (1.0 + 1.0 / psi0);

    let (outcome, check) = match &inner.outcome {
        CutOrCert::BalancedCut { cut: a, layers, .. } => {
            let s = transform_cut(g, &map, a);
            let check = check_transform(g, &ghat, &map, a, &s);
            if !check.holds() {
                return Err(Error::Invariant(format!("mapped cut violates the transfer claims: {check:?}")));
            }
            if !s.is_proper() {
                return Err(Error::Invariant("mapped cut is trivial".into()));
            }
            let vol = s.volume(g).min(g.volume() - s.volume(g)) as f64;
            if vol < b / 2.0 * g.volume() as f64 - 1e-9 {
                return Err(Error::Invariant(format!(
                    "mapped cut has volume {vol} below b/2·vol(G) = {}",
                    b / 2.0 * g.volume() as f64
                )));
            }
            let phi_s = conductance(g, &s)?;
            if phi_s > c * phi * (1.0 + 1e-12) {
                return Err(Error::Invariant(format!("mapped cut has conductance {phi_s} above {c}·φ")));
            }
            (
                CutOrCert::BalancedCut { cut: s, psi_achieved: phi_s, layers: layers.clone() },
                Some(check),
            )
        }
        // |X_S| = vol_G(S) with identical crossings, so the bound on Ĝ-sparsity
        // at vertex fraction β reads as a conductance bound at volume fraction β
        CutOrCert::Certificate { .. } => (inner.outcome.clone(), None),
    };
    Ok(ConductanceRun { outcome, inner, ghat, map, check, c })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{cycle, gen_bounded_degree, gen_dumbbell, star};
    use crate::graph::boundary_edges;
    use rand::{Rng, SeedableRng};

    #[test]
    fn single_edge_and_triangle() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let (ghat, map) = conductance_to_sparsity_graph(&g).unwrap();
        assert_eq!((ghat.n(), ghat.m()), (2, 1));
        assert_eq!(map.gadgets[0].kind, GadgetKind::Empty);

        let g = cycle(3);
        let (ghat, map) = conductance_to_sparsity_graph(&g).unwrap();
        assert_eq!((ghat.n(), ghat.m()), (6, 6));
        // vertex 0 has adjacency [(1, e0), (2, e2)] → ports 0, 1
        assert_eq!(ghat.edges()[..3], [(0, 2), (3, 4), (5, 1)]);
        assert_eq!(ghat.edges()[3..], [(0, 1), (2, 3), (4, 5)]);
        assert_eq!(map.psi0(), 1.0);
    }

    #[test]
    fn loops_take_two_ports() {
        let g = Graph::from_edges(2, &[(0, 0), (0, 1)]).unwrap();
        let (ghat, map) = conductance_to_sparsity_graph(&g).unwrap();
        assert_eq!(ghat.n(), 4);
        assert_eq!(map.ports(0), 0..3);
        assert_eq!(ghat.edge(0), (0, 1));
        assert_eq!(ghat.edge(1), (2, 3));
    }

    #[test]
    fn cut_preservation_exhaustive() {
        for seed in 0..30u64 {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let n = rng.gen_range(2..=10);
            let mut g = gen_bounded_degree(n, rng.gen_range(0..2 * n), 14, seed).unwrap();
            if seed % 3 == 0 {
                g.add_edge(0, 0).unwrap();
            }
            let (ghat, map) = conductance_to_sparsity_graph(&g).unwrap();
            assert_eq!(ghat.n(), 2 * g.m());
            for v in 0..n {
                assert_eq!(map.ports(v).len(), g.degree(v));
            }
            for mask in 0..(1u64 << n) {
                let s = Cut::from_mask(n, mask);
                let xs = map.lift(&s);
                assert_eq!(boundary_edges(&g, &s), boundary_edges(&ghat, &xs).into_iter().filter(|&e| e < g.m()).collect::<Vec<_>>());
                assert_eq!(boundary_size(&g, &s), boundary_size(&ghat, &xs), "seed {seed} mask {mask}");
                assert_eq!(transform_cut(&g, &map, &xs), s);
            }
        }
    }

    #[test]
    fn gadget_sparsity_is_certified() {
        for d in [2, 5, 10] {
            let (h, gadget) = build_gadget(d).unwrap();
            assert_eq!(gadget.psi, Some(exact_sparsest_cut(&h).unwrap().1));
        }
        for d in [11, 16, 17, 25, 40] {
            let (h, gadget) = build_gadget(d).unwrap();
            assert_eq!(h.n(), d);
            let psi = gadget.psi.unwrap();
            assert!(psi > 0.0);
            if d <= EXHAUSTIVE_LIMIT {
                assert_eq!(psi, exact_sparsest_cut(&h).unwrap().1);
            }
            if let GadgetKind::Sampled { .. } = gadget.kind {
                assert!(psi >= GADGET_PSI_TARGET);
            }
        }
    }

    #[test]
    fn transform_examples() {
        let g = cycle(3);
        let (_, map) = conductance_to_sparsity_graph(&g).unwrap();
        assert_eq!(transform_cut(&g, &map, &Cut::from_membership(vec![false; 6])).size(), 0);
        // ties go to S
        for mask in 0..64u64 {
            let a = Cut::from_mask(6, mask);
            let s = transform_cut(&g, &map, &a);
            for u in 0..3 {
                let inside = (2 * u..2 * u + 2).filter(|&x| mask >> x & 1 == 1).count();
                assert_eq!(s.contains(u), inside >= 1);
            }
        }
    }

    #[test]
    fn transfer_claims_on_random_cuts() {
        let mut applied = 0;
        for seed in 0..40u64 {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let n = rng.gen_range(4..=12);
            let g = gen_bounded_degree(n, rng.gen_range(0..2 * n), 13, seed).unwrap();
            let (ghat, map) = conductance_to_sparsity_graph(&g).unwrap();
            for _ in 0..50 {
                // start from a lifted cut and flip a few ports
                let s0 = Cut::from_membership((0..n).map(|_| rng.gen_bool(0.5)).collect());
                let mut side = map.lift(&s0).membership().to_vec();
                for _ in 0..rng.gen_range(0..4) {
                    let x = rng.gen_range(0..ghat.n());
                    side[x] = !side[x];
                }
                let a = Cut::from_membership(side);
                let s = transform_cut(&g, &map, &a);
                let check = check_transform(&g, &ghat, &map, &a, &s);
                assert!(check.holds(), "seed {seed}: {check:?}");
                applied += usize::from(check.volume_claim_applies);
            }
        }
        assert!(applied > 50);
    }

    #[test]
    fn self_loops() {
        let c4 = add_self_loops(&cycle(4));
        assert_eq!(c4.m(), 8);
        assert!((0..4).all(|v| c4.degree(v) == 4));
        let k4 = add_self_loops(&complete_graph(4));
        assert_eq!(k4.m(), 6 + 8);
        for mask in 1..15u64 {
            let s = Cut::from_mask(4, mask);
            assert_eq!(boundary_edges(&cycle(4), &s), boundary_edges(&c4, &s));
        }
    }

    #[test]
    fn k16_is_certified_for_conductance() {
        let g = complete_graph(16);
        let run = low_conductance_cut_or_certify(&g, 0.001, 0.25, 0, crate::cut_extract::DEFAULT_C_FACTOR, &crate::apsp::DijkstraFactory)
            .unwrap();
        let CutOrCert::Certificate { implied_bound, implied_balance, .. } = run.outcome else {
            panic!("expected certificate");
        };
        let min_volume = (implied_balance * g.volume() as f64 - 1e-9).ceil() as usize;
        let (_, best) = crate::verify::exact_balanced_min_conductance(&g, min_volume).unwrap().unwrap();
        assert!(best >= implied_bound);
    }

    #[test]
    fn driver_guards() {
        let f = &crate::apsp::DijkstraFactory;
        assert!(low_conductance_cut_or_certify(&Graph::from_edges(2, &[(0, 1)]).unwrap(), 0.1, 0.25, 0, 640.0, f).is_err());
        let disconnected = crate::gen::disjoint_union(&cycle(4), &cycle(4));
        assert!(low_conductance_cut_or_certify(&disconnected, 0.1, 0.25, 0, 640.0, f).is_err());
        assert!(low_conductance_cut_or_certify(&star(5), 0.1, 0.25, 0, 640.0, f).is_ok());
        assert!(low_conductance_cut_or_certify(&gen_dumbbell(4).unwrap(), 0.1, 0.5, 0, 640.0, f).is_err());
    }
}
