//! Brute-force and reference implementations used to check the pipeline.
//!
//! Nothing here calls into the cut, distance or embedding code it checks:
//! cut sizes are recounted from the raw edge list over bitmasks, distances
//! come from Bellman–Ford, and congestion is recounted from stored paths.

use serde::{Deserialize, Serialize};

use crate::embed::Embedding;
use crate::error::{Error, Result};
use crate::graph::{Cut, EdgeId, Graph, VertexId};

pub const EXHAUSTIVE_LIMIT: usize = 20;

/// Compares `a/b < c/d` exactly for nonnegative integers with positive denominators.
fn ratio_less(a: usize, b: usize, c: usize, d: usize) -> bool {
    (a as u128) * (d as u128) < (c as u128) * (b as u128)
}

/// Every nontrivial cut once, as the side not containing vertex `n-1`,
/// in increasing mask order; yields `(mask, |S|, |E(S, S̄)|)`.
fn enumerate_cuts(g: &Graph) -> Result<impl Iterator<Item = (u64, usize, usize)> + '_> {
    let n = g.n();
    if n > EXHAUSTIVE_LIMIT {
        return Err(Error::TooLarge { n, limit: EXHAUSTIVE_LIMIT });
    }
    if n < 2 {
        return Err(Error::InvalidParameter("exhaustive search needs n >= 2".into()));
    }
    let edges: Vec<(u32, u32)> = g
        .edges()
        .iter()
        .filter(|(u, v)| u != v)
        .map(|&(u, v)| (u as u32, v as u32))
        .collect();
    Ok((1u64..(1u64 << (n - 1))).map(move |mask| {
        let crossing = edges
            .iter()
            .filter(|&&(u, v)| ((mask >> u) ^ (mask >> v)) & 1 == 1)
            .count();
        (mask, mask.count_ones() as usize, crossing)
    }))
}

/// Minimum sparsity over all nontrivial cuts; the first minimizer in mask
/// order is returned (`S` never contains vertex `n-1`).
pub fn exact_sparsest_cut(g: &Graph) -> Result<(Cut, f64)> {
    exact_balanced_sparsest_cut_min_side(g, 1)
}

/// Minimum sparsity over cuts with both sides of size at least `⌈b·n⌉`.
pub fn exact_balanced_sparsest_cut(g: &Graph, b: f64) -> Result<(Cut, f64)> {
    let min_side = ((b * g.n() as f64) - 1e-9).ceil().max(1.0) as usize;
    exact_balanced_sparsest_cut_min_side(g, min_side)
}

pub fn exact_balanced_sparsest_cut_min_side(g: &Graph, min_side: usize) -> Result<(Cut, f64)> {
    let n = g.n();
    let mut best: Option<(u64, usize, usize)> = None;
    for (mask, size, crossing) in enumerate_cuts(g)? {
        let smaller = size.min(n - size);
        if smaller < min_side.max(1) {
            continue;
        }
        let improves = match best {
            None => true,
            Some((_, bc, bs)) => ratio_less(crossing, smaller, bc, bs),
        };
        if improves {
            best = Some((mask, crossing, smaller));
        }
    }
    let (mask, crossing, smaller) = best.ok_or(Error::Infeasible)?;
    Ok((Cut::from_mask(n, mask), crossing as f64 / smaller as f64))
}

/// Minimum conductance over cuts whose sides both have volume at least
/// `min_volume`; `None` if no cut qualifies.
pub fn exact_balanced_min_conductance(g: &Graph, min_volume: usize) -> Result<Option<(Cut, f64)>> {
    let n = g.n();
    let mut degree = vec![0usize; n];
    for &(u, v) in g.edges() {
        degree[u] += 1;
        degree[v] += 1;
    }
    let total: usize = degree.iter().sum();
    let mut best: Option<(u64, usize, usize)> = None;
    for (mask, _, crossing) in enumerate_cuts(g)? {
        let vol: usize = (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| degree[i]).sum();
        let smaller = vol.min(total - vol);
        if smaller == 0 || smaller < min_volume {
            continue;
        }
        let improves = match best {
            None => true,
            Some((_, bc, bs)) => ratio_less(crossing, smaller, bc, bs),
        };
        if improves {
            best = Some((mask, crossing, smaller));
        }
    }
    Ok(best.map(|(mask, c, s)| (Cut::from_mask(n, mask), c as f64 / s as f64)))
}

/// Bellman–Ford distance; `f64::INFINITY` when unreachable.
pub fn reference_distance(g: &Graph, w: &[f64], u: VertexId, v: VertexId) -> f64 {
    reference_distances(g, w, u)[v]
}

pub fn reference_distances(g: &Graph, w: &[f64], u: VertexId) -> Vec<f64> {
    let n = g.n();
    let mut dist = vec![f64::INFINITY; n];
    dist[u] = 0.0;
    for _ in 0..n {
        let mut changed = false;
        for (e, &(a, b)) in g.edges().iter().enumerate() {
            for (x, y) in [(a, b), (b, a)] {
                if dist[x] + w[e] < dist[y] {
                    dist[y] = dist[x] + w[e];
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    dist
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingReport {
    pub embedded: usize,
    pub missing: usize,
    pub congestion: usize,
    pub violations: Vec<String>,
}

impl EmbeddingReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that `pi` embeds exactly the `H`-edges in `h_prime` by valid
/// endpoint-correct walks in `G`, and recounts congestion from scratch.
pub fn check_embedding(g: &Graph, h: &Graph, h_prime: &[EdgeId], pi: &Embedding) -> EmbeddingReport {
    let paths: Vec<(EdgeId, &[EdgeId])> = pi.paths().map(|(e, p)| (e, p)).collect();
    let mut report = check_paths(g, h, h_prime, &paths);
    if report.congestion != pi.congestion() {
        report.violations.push(format!(
            "cached congestion {} differs from recount {}",
            pi.congestion(),
            report.congestion
        ));
    }
    report
}

/// Same checks on raw `(H-edge, path)` pairs.
pub fn check_paths(g: &Graph, h: &Graph, h_prime: &[EdgeId], paths: &[(EdgeId, &[EdgeId])]) -> EmbeddingReport {
    let mut violations = Vec::new();
    if g.n() != h.n() {
        violations.push(format!("G has {} vertices but H has {}", g.n(), h.n()));
    }
    let mut listed = vec![false; h.m()];
    for &e in h_prime {
        if e >= h.m() {
            violations.push(format!("H' lists edge {e} but H has {} edges", h.m()));
        } else if std::mem::replace(&mut listed[e], true) {
            violations.push(format!("H' lists edge {e} twice"));
        }
    }
    let mut usage = vec![0usize; g.m()];
    let mut has_path = vec![false; h.m()];
    for &(he, path) in paths {
        if he >= h.m() {
            violations.push(format!("path stored for nonexistent H-edge {he}"));
            continue;
        }
        if std::mem::replace(&mut has_path[he], true) {
            violations.push(format!("H-edge {he} has two paths"));
        }
        if !listed[he] {
            violations.push(format!("H-edge {he} has a path but is not in H'"));
        }
        let (start, end) = h.edges()[he];
        let mut at = start;
        let mut ok = true;
        for &f in path {
            if f >= g.m() {
                violations.push(format!("H-edge {he}: path uses nonexistent G-edge {f}"));
                ok = false;
                break;
            }
            usage[f] += 1;
            let (a, b) = g.edges()[f];
            if a == at {
                at = b;
            } else if b == at {
                at = a;
            } else {
                violations.push(format!("H-edge {he}: G-edge {f} is not incident to vertex {at}"));
                ok = false;
                break;
            }
        }
        if ok && at != end {
            violations.push(format!("H-edge {he}: path from {start} ends at {at}, expected {end}"));
        }
    }
    for e in 0..h.m() {
        if listed[e] && !has_path[e] {
            violations.push(format!("H-edge {e} is in H' but has no path"));
        }
    }
    let embedded = listed.iter().filter(|&&b| b).count();
    EmbeddingReport {
        embedded,
        missing: h.m() - embedded,
        congestion: usage.into_iter().max().unwrap_or(0),
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{complete_graph, cycle, gen_dumbbell, path, star};

    #[test]
    fn sparsest_cut_examples() {
        let (_, psi) = exact_sparsest_cut(&cycle(6)).unwrap();
        assert_eq!(psi, 2.0 / 3.0);

        let (s, psi) = exact_sparsest_cut(&gen_dumbbell(4).unwrap()).unwrap();
        assert_eq!(psi, 0.25);
        assert_eq!(s.vertices(), vec![0, 1, 2, 3]);

        assert_eq!(exact_sparsest_cut(&complete_graph(4)).unwrap().1, 2.0);
    }

    #[test]
    fn balanced_examples() {
        let (s, psi) = exact_balanced_sparsest_cut(&cycle(6), 1.0 / 3.0).unwrap();
        assert_eq!(psi, 2.0 / 3.0);
        assert_eq!(s.size(), 3);
        assert_eq!(exact_balanced_sparsest_cut(&complete_graph(4), 0.5).unwrap().1, 2.0);
        let (s, psi) = exact_balanced_sparsest_cut(&star(5), 0.5).unwrap();
        assert_eq!(s.size(), 3);
        assert_eq!(psi, 1.0);
        assert_eq!(exact_balanced_sparsest_cut(&cycle(5), 0.5), Err(Error::Infeasible));
        assert!(matches!(exact_sparsest_cut(&cycle(21)), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn min_conductance_matches_hand_count() {
        // D8: the bridge cut has conductance 1/13
        let (_, phi) = exact_balanced_min_conductance(&gen_dumbbell(4).unwrap(), 1).unwrap().unwrap();
        assert_eq!(phi, 1.0 / 13.0);
    }

    #[test]
    fn bellman_ford_examples() {
        assert_eq!(reference_distance(&path(3), &[1.0, 5.0], 0, 2), 6.0);
        assert_eq!(reference_distance(&path(3), &[1.0, 5.0], 1, 1), 0.0);
        assert_eq!(reference_distance(&cycle(4), &[1.0; 4], 0, 2), 2.0);
        assert_eq!(reference_distance(&complete_graph(4), &[1.0; 6], 0, 3), 1.0);
        assert_eq!(reference_distance(&cycle(4), &[11.0, 1.0, 1.0, 1.0], 0, 1), 3.0);
        let g = Graph::from_edges(3, &[(0, 1)]).unwrap();
        assert_eq!(reference_distance(&g, &[1.0], 0, 2), f64::INFINITY);
    }

    #[test]
    fn k4_self_embedding_is_clean() {
        let k4 = complete_graph(4);
        let mut pi = Embedding::new(k4.m());
        for e in 0..k4.m() {
            pi.insert(e, vec![e]);
        }
        let all: Vec<_> = (0..6).collect();
        let r = check_embedding(&k4, &k4, &all, &pi);
        assert!(r.is_clean(), "{:?}", r.violations);
        assert_eq!((r.embedded, r.missing, r.congestion), (6, 0, 1));
    }

    #[test]
    fn mismatched_endpoint_flagged() {
        let k4 = complete_graph(4);
        let mut pi = Embedding::new(k4.m());
        // H-edge 0 is (0, 1); edge 1 is (0, 2)
        pi.insert(0, vec![1]);
        let r = check_embedding(&k4, &k4, &[0], &pi);
        assert_eq!(r.violations.len(), 1);
        assert!(r.violations[0].contains("ends at 2"));

        let mut broken = Embedding::new(k4.m());
        broken.insert(0, vec![5]);
        assert!(!check_embedding(&k4, &k4, &[0], &broken).is_clean());
        assert!(!check_embedding(&k4, &k4, &[0, 1], &Embedding::new(k4.m())).is_clean());
    }

    #[test]
    fn congestion_recount_matches_on_random_paths() {
        use rand::{Rng, SeedableRng};
        let g = crate::gen::gen_random_regular(20, 4, 3).unwrap();
        let h = crate::expander::rand_log_expander(20, 5, 9).unwrap();
        for seed in 0..20 {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let w: Vec<f64> = (0..g.m()).map(|_| rng.gen_range(1.0..4.0)).collect();
            let w = crate::graph::EdgeWeights::from_values(w).unwrap();
            let mut pi = Embedding::new(g.m());
            let mut hp = Vec::new();
            for e in 0..h.m() {
                if rng.gen_bool(0.6) {
                    let (a, b) = h.edge(e);
                    let tree = crate::apsp::dijkstra(&g, &w, a, Some(b));
                    pi.insert(e, tree.path_to(b).unwrap());
                    hp.push(e);
                }
            }
            let r = check_embedding(&g, &h, &hp, &pi);
            assert!(r.is_clean(), "{:?}", r.violations);
            assert_eq!(r.congestion, pi.congestion());
        }
    }
}
