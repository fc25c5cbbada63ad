//! Expander graphs used as embedding targets.
//!
//! Two constructions are available: the randomized log-degree sampler (each
//! vertex picks `k` uniform neighbours, loops and repeats kept) and the
//! Margulis–Gabber–Galil graph on `Z_k × Z_k`. Neither carries a provable
//! sparsity constant here, so every [`ExpanderSpec`] records the value it is
//! trusted to achieve in `psi_claimed`; everything derived from a certificate
//! scales with that number.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graph::Graph;
use crate::verify;

/// Sparsity trusted for the randomized construction at the default `k`.
pub const RANDOMIZED_PSI_CLAIMED: f64 = 1.0;
/// Sparsity trusted for the MGG construction.
pub const MGG_PSI_CLAIMED: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExpanderMode {
    #[serde(rename = "rand")]
    Randomized,
    Mgg,
}

impl std::str::FromStr for ExpanderMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rand" | "randomized" => Ok(ExpanderMode::Randomized),
            "mgg" => Ok(ExpanderMode::Mgg),
            other => invalid(format!("unknown expander mode `{other}`")),
        }
    }
}

impl std::fmt::Display for ExpanderMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ExpanderMode::Randomized => "rand",
            ExpanderMode::Mgg => "mgg",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpanderSpec {
    pub n: usize,
    pub mode: ExpanderMode,
    pub seed: u64,
    /// Samples per vertex; unused in MGG mode.
    pub k: usize,
    pub psi_claimed: f64,
}

/// `⌈80 ln n⌉`.
pub fn default_k(n: usize) -> usize {
    ((80.0 * (n as f64).ln()).ceil() as usize).max(1)
}

impl ExpanderSpec {
    pub fn randomized(n: usize, seed: u64) -> Self {
        ExpanderSpec {
            n,
            mode: ExpanderMode::Randomized,
            seed,
            k: default_k(n),
            psi_claimed: RANDOMIZED_PSI_CLAIMED,
        }
    }

    /// Randomized mode with an explicit `k`; the claimed sparsity shrinks
    /// proportionally below the default sample count.
    pub fn randomized_with_k(n: usize, k: usize, seed: u64) -> Self {
        let ratio = (k as f64 / default_k(n) as f64).min(1.0);
        ExpanderSpec {
            k,
            psi_claimed: RANDOMIZED_PSI_CLAIMED * ratio,
            ..ExpanderSpec::randomized(n, seed)
        }
    }

    pub fn mgg(n: usize) -> Self {
        ExpanderSpec {
            n,
            mode: ExpanderMode::Mgg,
            seed: 0,
            k: 0,
            psi_claimed: MGG_PSI_CLAIMED,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return invalid(format!("expander needs n >= 2, got {}", self.n));
        }
        if self.mode == ExpanderMode::Randomized && self.k == 0 {
            return invalid("expander needs k >= 1");
        }
        if !(self.psi_claimed > 0.0) {
            return invalid("psi_claimed must be positive");
        }
        Ok(())
    }

    pub fn build(&self) -> Result<Graph> {
        self.validate()?;
        match self.mode {
            ExpanderMode::Randomized => rand_log_expander(self.n, self.k, self.seed),
            ExpanderMode::Mgg => mgg_expander_folded(self.n),
        }
    }
}

/// For every vertex `v` in order, samples `k` uniform vertices `u` and adds
/// `(v, u)`. The edge count is exactly `n·k`.
pub fn rand_log_expander(n: usize, k: usize, seed: u64) -> Result<Graph> {
    if n < 2 {
        return invalid(format!("expander needs n >= 2, got {n}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::new(n);
    for v in 0..n {
        for _ in 0..k {
            let u = rng.gen_range(0..n);
            g.add_edge(v, u)?;
        }
    }
    Ok(g)
}

/// The four forward affine maps; their inverses supply the other four
/// neighbours of each vertex.
fn mgg_forward(k: usize, x: usize, y: usize) -> [(usize, usize); 4] {
    [
        ((x + 2 * y) % k, y),
        ((x + 2 * y + 1) % k, y),
        (x, (y + 2 * x) % k),
        (x, (y + 2 * x + 1) % k),
    ]
}

/// Margulis–Gabber–Galil graph on `k²` vertices, vertex `(x, y)` at id
/// `x·k + y`. 8-regular counting loops twice; `4k²` edges.
pub fn mgg_expander(k: usize) -> Result<Graph> {
    if k < 2 {
        return invalid(format!("mgg expander needs k >= 2, got {k}"));
    }
    let mut g = Graph::new(k * k);
    for x in 0..k {
        for y in 0..k {
            for (a, b) in mgg_forward(k, x, y) {
                g.add_edge(x * k + y, a * k + b)?;
            }
        }
    }
    Ok(g)
}

/// Best-effort deterministic MGG graph for arbitrary `n`: build on `⌈√n⌉²`
/// vertices and fold vertex `j >= n` onto `j mod n`.
pub fn mgg_expander_folded(n: usize) -> Result<Graph> {
    if n < 2 {
        return invalid(format!("expander needs n >= 2, got {n}"));
    }
    let mut k = (n as f64).sqrt().ceil() as usize;
    while k * k < n {
        k += 1;
    }
    let k = k.max(2);
    let full = mgg_expander(k)?;
    if k * k == n {
        return Ok(full);
    }
    let mut g = Graph::new(n);
    for &(u, v) in full.edges() {
        g.add_edge(u % n, v % n)?;
    }
    Ok(g)
}

/// Exact `Ψ(H)` by enumerating every cut; `n <= 20`.
pub fn verify_expander_bruteforce(h: &Graph) -> Result<f64> {
    verify::exact_sparsest_cut(h).map(|(_, psi)| psi)
}

/// Second-smallest eigenvalue of the normalized Laplacian
/// `I - D^{-1/2} A D^{-1/2}`, found as `1 - ν` where `ν` is the top eigenvalue
/// of the normalized adjacency with the trivial eigenvector `D^{1/2}1`
/// deflated. The top eigenvalue is extracted by Lanczos with full
/// reorthogonalization; Cheeger gives `Φ(H) >= λ₂/2`.
pub fn spectral_lower_bound(h: &Graph) -> Result<f64> {
    spectral_gap(h, 1e-6)
}

pub fn spectral_gap(h: &Graph, tol: f64) -> Result<f64> {
    let n = h.n();
    if n < 2 {
        return invalid("spectral bound needs n >= 2");
    }
    if let Some(v) = (0..n).find(|&v| h.degree(v) == 0) {
        return invalid(format!("vertex {v} is isolated"));
    }
    let inv_sqrt: Vec<f64> = (0..n).map(|v| 1.0 / (h.degree(v) as f64).sqrt()).collect();
    let apply = |x: &[f64], out: &mut [f64]| {
        out.iter_mut().for_each(|o| *o = 0.0);
        for &(u, v) in h.edges() {
            if u == v {
                out[u] += 2.0 * x[u] * inv_sqrt[u] * inv_sqrt[u];
            } else {
                let c = inv_sqrt[u] * inv_sqrt[v];
                out[u] += c * x[v];
                out[v] += c * x[u];
            }
        }
    };

    let mut trivial: Vec<f64> = (0..n).map(|v| (h.degree(v) as f64).sqrt()).collect();
    normalize(&mut trivial);

    let mut rng = ChaCha8Rng::seed_from_u64(0x1a2b);
    let mut q: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() - 0.5).collect();
    project_out(&mut q, &trivial);
    if normalize(&mut q) == 0.0 {
        return Ok(1.0);
    }

    let max_steps = n - 1;
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut alphas = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut w = vec![0.0; n];
    let mut history: Vec<f64> = Vec::new();
    for step in 0..max_steps {
        apply(&q, &mut w);
        let alpha = dot(&q, &w);
        for (wi, qi) in w.iter_mut().zip(&q) {
            *wi -= alpha * qi;
        }
        if let (Some(prev), Some(&beta)) = (basis.last(), betas.last()) {
            for (wi, pi) in w.iter_mut().zip(prev) {
                *wi -= beta * pi;
            }
        }
        basis.push(q.clone());
        alphas.push(alpha);
        // two passes of Gram-Schmidt against everything seen so far
        for _ in 0..2 {
            project_out(&mut w, &trivial);
            for b in &basis {
                project_out(&mut w, b);
            }
        }
        let beta = norm(&w);
        let top = tridiagonal_max_eigenvalue(&alphas, &betas);
        history.push(top);
        let exhausted = beta <= 1e-10 || step + 1 == max_steps;
        let settled = history.len() > 4 && {
            let old = history[history.len() - 4];
            (top - old).abs() <= tol * 1e-3
        };
        if exhausted || settled {
            return Ok((1.0 - top).max(0.0));
        }
        betas.push(beta);
        q = w.iter().map(|x| x / beta).collect();
    }
    Err(Error::NoConvergence {
        iterations: max_steps,
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn normalize(a: &mut [f64]) -> f64 {
    let len = norm(a);
    if len > 0.0 {
        a.iter_mut().for_each(|x| *x /= len);
    }
    len
}

fn project_out(a: &mut [f64], unit: &[f64]) {
    let c = dot(a, unit);
    for (x, u) in a.iter_mut().zip(unit) {
        *x -= c * u;
    }
}

/// Largest eigenvalue of the symmetric tridiagonal matrix with diagonal
/// `diag` and off-diagonal `off` (length `diag.len() - 1`), by Sturm bisection.
fn tridiagonal_max_eigenvalue(diag: &[f64], off: &[f64]) -> f64 {
    let k = diag.len();
    let mut radius = 0.0f64;
    for i in 0..k {
        let left = if i > 0 { off[i - 1].abs() } else { 0.0 };
        let right = if i + 1 < k { off[i].abs() } else { 0.0 };
        radius = radius.max(diag[i].abs() + left + right);
    }
    // count of eigenvalues strictly below x
    let below = |x: f64| {
        let mut count = 0;
        let mut d = 1.0;
        for i in 0..k {
            let b2 = if i > 0 { off[i - 1] * off[i - 1] } else { 0.0 };
            d = diag[i] - x - if i > 0 { b2 / d } else { 0.0 };
            if d == 0.0 {
                d = -1e-300;
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    };
    let (mut lo, mut hi) = (-radius - 1.0, radius + 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if below(mid) >= k {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-15 * (1.0 + hi.abs()) {
            break;
        }
    }
    0.5 * (lo + hi)
}
