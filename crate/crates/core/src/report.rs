//! Result files and their re-verification.
//!
//! A [`Report`] echoes every effective constant of a run, so [`verify_report`]
//! can rebuild `H` (and `Ĝ` for conductance runs) and re-check the claimed
//! cut or certificate from the graph alone.

use serde::{Deserialize, Serialize};

use crate::cut_extract::{certificate_lower_bound, CutOrCert, RunParams, SparseCutRun};
use crate::embed::Embedding;
use crate::error::Result;
use crate::expander::ExpanderSpec;
use crate::graph::{boundary_size, conductance, sparsity, Cut, EdgeId, Graph};
use crate::reductions::{conductance_to_sparsity_graph, ConductanceRun};
use crate::verify::{check_paths, exact_balanced_min_conductance, exact_balanced_sparsest_cut_min_side};

/// Largest graph for which `verify` also runs the exhaustive soundness check.
pub const EXHAUSTIVE_VERIFY_LIMIT: usize = 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Cut,
    Certificate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    Sparsity,
    Conductance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub objective: Objective,
    pub n: usize,
    pub m: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub psi: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub phi: Option<f64>,
    pub balance: f64,
    pub seed: u64,
    pub expander: ExpanderSpec,
    pub h_edges: usize,
    /// Vertices of the graph the expander is embedded into.
    pub host_n: usize,
    pub c_factor: f64,
    pub c: f64,
    pub eta: f64,
    pub b_mwu: f64,
    pub degree_bound: usize,
    pub alpha: f64,
    pub oracle: String,
    pub b_prime: Option<f64>,
    pub d: Option<u64>,
    /// Conductance runs: the mapped cut's conductance is at most `gadget_c·φ`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub gadget_c: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutReport {
    pub vertices: Vec<usize>,
    pub boundary: usize,
    pub sparsity: f64,
    pub conductance: f64,
    /// `min(|S|, |S̄|)/n`, or `min(vol S, vol S̄)/vol G` for conductance runs.
    pub balance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddedEdge {
    pub edge: EdgeId,
    pub path: Vec<EdgeId>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub embedded_edges: Vec<EmbeddedEdge>,
    pub missing_edges: Vec<EdgeId>,
    pub congestion: usize,
    pub implied_bound: f64,
    pub implied_balance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Accounting {
    pub oracle_updates: u64,
    pub oracle_queries: u64,
    pub oracle_path_queries: u64,
    pub wall_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub kind: Kind,
    pub params: Params,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub cut: Option<CutReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub certificate: Option<CertificateReport>,
    pub accounting: Accounting,
}

fn params(objective: Objective, g: &Graph, p: &RunParams, seed: u64) -> Params {
    Params {
        objective,
        n: g.n(),
        m: g.m(),
        psi: (objective == Objective::Sparsity).then_some(p.psi),
        phi: (objective == Objective::Conductance).then_some(p.psi),
        balance: p.balance,
        seed,
        expander: p.expander.clone(),
        h_edges: p.h_edges,
        host_n: p.n,
        c_factor: p.c_factor,
        c: p.c,
        eta: p.eta,
        b_mwu: p.b_mwu,
        degree_bound: p.degree_bound,
        alpha: p.alpha,
        oracle: p.oracle.clone(),
        b_prime: p.b_prime,
        d: p.d,
        gadget_c: None,
    }
}

fn cut_report(g: &Graph, s: &Cut, objective: Objective) -> Result<CutReport> {
    let balance = match objective {
        Objective::Sparsity => s.size().min(s.complement_size()) as f64 / g.n() as f64,
        Objective::Conductance => {
            let vol = s.volume(g);
            vol.min(g.volume() - vol) as f64 / g.volume() as f64
        }
    };
    Ok(CutReport {
        vertices: s.vertices(),
        boundary: boundary_size(g, s),
        sparsity: sparsity(g, s)?,
        conductance: conductance(g, s)?,
        balance,
    })
}

fn certificate_report(embedding: &Embedding, missing: &[EdgeId], bound: f64, balance: f64) -> CertificateReport {
    CertificateReport {
        embedded_edges: embedding
            .paths()
            .map(|(edge, path)| EmbeddedEdge { edge, path: path.to_vec() })
            .collect(),
        missing_edges: missing.to_vec(),
        congestion: embedding.congestion(),
        implied_bound: bound,
        implied_balance: balance,
    }
}

fn assemble(objective: Objective, g: &Graph, outcome: &CutOrCert, run: &SparseCutRun, seed: u64, wall_ms: u64) -> Result<Report> {
    let mut report = Report {
        kind: Kind::Cut,
        params: params(objective, g, &run.params, seed),
        cut: None,
        certificate: None,
        accounting: Accounting {
            oracle_updates: run.stats.updates,
            oracle_queries: run.stats.distance_queries,
            oracle_path_queries: run.stats.path_queries,
            wall_ms,
        },
    };
    match outcome {
        CutOrCert::BalancedCut { cut, .. } => report.cut = Some(cut_report(g, cut, objective)?),
        CutOrCert::Certificate { missing, embedding, implied_bound, implied_balance, .. } => {
            report.kind = Kind::Certificate;
            report.certificate = Some(certificate_report(embedding, missing, *implied_bound, *implied_balance));
        }
    }
    Ok(report)
}

impl Report {
    pub fn from_sparsity_run(g: &Graph, run: &SparseCutRun, seed: u64, wall_ms: u64) -> Result<Report> {
        assemble(Objective::Sparsity, g, &run.outcome, run, seed, wall_ms)
    }

    pub fn from_conductance_run(g: &Graph, run: &ConductanceRun, seed: u64, wall_ms: u64) -> Result<Report> {
        let mut report = assemble(Objective::Conductance, g, &run.outcome, &run.inner, seed, wall_ms)?;
        report.params.gadget_c = Some(run.c);
        Ok(report)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn check(out: &mut Vec<Check>, name: &str, pass: bool, detail: impl Into<String>) {
    out.push(Check { name: name.to_string(), pass, detail: detail.into() });
}

fn close(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= 1e-9 * a.abs().max(b.abs())
}

/// Re-checks `report` against `g`; every returned check must pass.
pub fn verify_report(g: &Graph, report: &Report) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let p = &report.params;
    check(&mut out, "graph", p.n == g.n() && p.m == g.m(), format!("report n={} m={}, graph n={} m={}", p.n, p.m, g.n(), g.m()));
    if !out[0].pass {
        return Ok(out);
    }
    let target = match p.objective {
        Objective::Sparsity => p.psi,
        Objective::Conductance => p.phi,
    };
    let Some(target) = target else {
        check(&mut out, "params", false, "missing psi/phi for the objective");
        return Ok(out);
    };
    match (report.kind, &report.cut, &report.certificate) {
        (Kind::Cut, Some(c), None) => verify_cut(g, p, target, c, &mut out)?,
        (Kind::Certificate, None, Some(c)) => verify_certificate(g, p, c, &mut out)?,
        _ => check(&mut out, "shape", false, "kind does not match the cut/certificate fields"),
    }
    Ok(out)
}

fn verify_cut(g: &Graph, p: &Params, target: f64, c: &CutReport, out: &mut Vec<Check>) -> Result<()> {
    if c.vertices.iter().any(|&v| v >= g.n()) || c.vertices.windows(2).any(|w| w[0] >= w[1]) {
        check(out, "vertices", false, "vertex list out of range or not strictly increasing");
        return Ok(());
    }
    let s = Cut::from_vertices(g.n(), &c.vertices)?;
    if !s.is_proper() {
        check(out, "vertices", false, "cut is trivial");
        return Ok(());
    }
    let fresh = cut_report(g, &s, p.objective)?;
    check(out, "boundary", fresh.boundary == c.boundary, format!("recomputed {}, reported {}", fresh.boundary, c.boundary));
    check(out, "sparsity", close(fresh.sparsity, c.sparsity), format!("recomputed {}, reported {}", fresh.sparsity, c.sparsity));
    check(
        out,
        "conductance",
        close(fresh.conductance, c.conductance),
        format!("recomputed {}, reported {}", fresh.conductance, c.conductance),
    );
    check(out, "balance_value", close(fresh.balance, c.balance), format!("recomputed {}, reported {}", fresh.balance, c.balance));
    match p.objective {
        Objective::Sparsity => {
            check(out, "quality", fresh.sparsity <= target, format!("sparsity {} vs psi {target}", fresh.sparsity));
            check(out, "balance", fresh.balance >= p.balance - 1e-9, format!("balance {} vs b {}", fresh.balance, p.balance));
        }
        Objective::Conductance => {
            let factor = p.gadget_c.unwrap_or(1.0);
            check(
                out,
                "quality",
                fresh.conductance <= factor * target * (1.0 + 1e-12),
                format!("conductance {} vs {factor}·phi = {}", fresh.conductance, factor * target),
            );
            check(
                out,
                "balance",
                fresh.balance >= p.balance / 2.0 - 1e-9,
                format!("volume balance {} vs b/2 = {}", fresh.balance, p.balance / 2.0),
            );
        }
    }
    Ok(())
}

fn verify_certificate(g: &Graph, p: &Params, c: &CertificateReport, out: &mut Vec<Check>) -> Result<()> {
    let ghat;
    let host = match p.objective {
        Objective::Sparsity => g,
        Objective::Conductance => {
            ghat = conductance_to_sparsity_graph(g)?.0;
            &ghat
        }
    };
    check(out, "host", host.n() == p.host_n, format!("host has {} vertices, report says {}", host.n(), p.host_n));
    if host.n() != p.expander.n {
        check(out, "expander", false, "expander size differs from host");
        return Ok(());
    }
    let h = p.expander.build()?;
    check(out, "expander", h.m() == p.h_edges, format!("rebuilt H has {} edges, report says {}", h.m(), p.h_edges));
    let h_prime: Vec<EdgeId> = c.embedded_edges.iter().map(|x| x.edge).collect();
    let paths: Vec<(EdgeId, &[EdgeId])> = c.embedded_edges.iter().map(|x| (x.edge, x.path.as_slice())).collect();
    let emb = check_paths(host, &h, &h_prime, &paths);
    check(out, "paths", emb.is_clean(), emb.violations.first().cloned().unwrap_or_default());
    check(out, "congestion", emb.congestion == c.congestion, format!("recounted {}, reported {}", emb.congestion, c.congestion));

    let mut listed = vec![false; h.m()];
    h_prime.iter().filter(|&&e| e < h.m()).for_each(|&e| listed[e] = true);
    let missing: Vec<EdgeId> = (0..h.m()).filter(|&e| !listed[e]).collect();
    check(out, "missing", missing == c.missing_edges, format!("{} edges of H unembedded, {} reported", missing.len(), c.missing_edges.len()));
    let missing_bound = p.degree_bound as f64 * p.b_mwu * host.n() as f64;
    check(
        out,
        "missing_bound",
        missing.len() as f64 <= missing_bound,
        format!("{} missing vs Δ·b·n = {missing_bound}", missing.len()),
    );
    let congestion_bound = 2.0 * (2.0 * p.c * p.alpha / p.b_mwu).ln() / p.eta;
    check(
        out,
        "congestion_bound",
        emb.congestion as f64 <= congestion_bound,
        format!("{} vs 2·ln(2Cα/b)/η = {congestion_bound}", emb.congestion),
    );

    let mut pi = Embedding::new(host.m());
    for x in &c.embedded_edges {
        if x.path.iter().all(|&f| f < host.m()) {
            pi.insert(x.edge, x.path.clone());
        }
    }
    let (bound, balance) = certificate_lower_bound(&h, p.expander.psi_claimed, &h_prime, &pi);
    check(
        out,
        "implied",
        close(bound, c.implied_bound) && close(balance, c.implied_balance),
        format!("recomputed ({bound}, {balance}), reported ({}, {})", c.implied_bound, c.implied_balance),
    );

    if g.n() <= EXHAUSTIVE_VERIFY_LIMIT {
        let best = match p.objective {
            Objective::Sparsity => {
                let min_side = ((balance * g.n() as f64 - 1e-9).ceil() as usize).max(1);
                exact_balanced_sparsest_cut_min_side(g, min_side).ok().map(|(_, v)| v)
            }
            Objective::Conductance => {
                let min_volume = ((balance * g.volume() as f64 - 1e-9).ceil() as usize).max(1);
                exact_balanced_min_conductance(g, min_volume)?.map(|(_, v)| v)
            }
        };
        match best {
            Some(v) => check(out, "exhaustive", v >= bound * (1.0 - 1e-9), format!("best balanced cut {v} vs bound {bound}")),
            None => check(out, "exhaustive", true, "no cut meets the balance"),
        }
    }
    Ok(())
}
