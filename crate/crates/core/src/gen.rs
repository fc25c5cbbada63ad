//! Deterministic test-graph generators.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Result};
use crate::graph::{Graph, VertexId};

/// Degree of each side of [`gen_planted`].
pub const PLANTED_DEGREE: usize = 4;

pub fn complete_graph(n: usize) -> Graph {
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            g.add_edge(u, v).expect("in range");
        }
    }
    g
}

pub fn cycle(n: usize) -> Graph {
    let mut g = Graph::new(n);
    for v in 0..n {
        g.add_edge(v, (v + 1) % n).expect("in range");
    }
    g
}

pub fn path(n: usize) -> Graph {
    let mut g = Graph::new(n);
    for v in 1..n {
        g.add_edge(v - 1, v).expect("in range");
    }
    g
}

/// Star with center 0 and `leaves` leaves.
pub fn star(leaves: usize) -> Graph {
    let mut g = Graph::new(leaves + 1);
    for v in 1..=leaves {
        g.add_edge(0, v).expect("in range");
    }
    g
}

/// Two copies of `K_k` on `0..k` and `k..2k` joined by the bridge `(k-1, k)`.
pub fn gen_dumbbell(k: usize) -> Result<Graph> {
    if k < 2 {
        return invalid("dumbbell needs k >= 2");
    }
    let clique = complete_graph(k);
    let mut g = disjoint_union(&clique, &clique);
    g.add_edge(k - 1, k)?;
    Ok(g)
}

pub fn gen_hypercube(d: usize) -> Result<Graph> {
    if d == 0 || d > 24 {
        return invalid("hypercube dimension must be in 1..=24");
    }
    let n = 1usize << d;
    let mut g = Graph::new(n);
    for v in 0..n {
        for bit in 0..d {
            let u = v ^ (1 << bit);
            if v < u {
                g.add_edge(v, u)?;
            }
        }
    }
    Ok(g)
}

/// Uniform-ish simple `d`-regular graph from the pairing model, restarting
/// whenever the greedy pairing gets stuck on a loop or a repeated pair.
pub fn gen_random_regular(n: usize, d: usize, seed: u64) -> Result<Graph> {
    if d >= n {
        return invalid(format!("degree {d} must be below n = {n}"));
    }
    if (n * d) % 2 == 1 {
        return invalid(format!("n * d = {} must be even", n * d));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    const MAX_ATTEMPTS: usize = 10_000;
    for _ in 0..MAX_ATTEMPTS {
        if let Some(edges) = try_pairing(n, d, &mut rng) {
            return Graph::from_edges(n, &edges);
        }
    }
    invalid(format!("failed to sample a simple {d}-regular graph on {n} vertices"))
}

fn try_pairing(n: usize, d: usize, rng: &mut ChaCha8Rng) -> Option<Vec<(VertexId, VertexId)>> {
    let mut points: Vec<VertexId> = (0..n).flat_map(|v| std::iter::repeat(v).take(d)).collect();
    let mut adjacent = std::collections::HashSet::new();
    let mut edges = Vec::with_capacity(n * d / 2);
    while !points.is_empty() {
        let mut placed = false;
        // a handful of tries before declaring the partial pairing stuck
        for _ in 0..64 {
            let i = rng.gen_range(0..points.len());
            let j = rng.gen_range(0..points.len());
            let (u, v) = (points[i], points[j]);
            if i == j || u == v || adjacent.contains(&(u.min(v), u.max(v))) {
                continue;
            }
            adjacent.insert((u.min(v), u.max(v)));
            edges.push((u.min(v), u.max(v)));
            let (hi, lo) = (i.max(j), i.min(j));
            points.swap_remove(hi);
            points.swap_remove(lo);
            placed = true;
            break;
        }
        if !placed {
            return None;
        }
    }
    Some(edges)
}

/// Two seed-fixed random [`PLANTED_DEGREE`]-regular expanders on `k` vertices
/// each, joined by `cross_edges` edges with pairwise distinct endpoints.
pub fn gen_planted(k: usize, cross_edges: usize, seed: u64) -> Result<Graph> {
    if cross_edges > k {
        return invalid(format!("cannot place {cross_edges} disjoint cross edges between sides of size {k}"));
    }
    let left = gen_random_regular(k, PLANTED_DEGREE, seed)?;
    let right = gen_random_regular(k, PLANTED_DEGREE, seed.wrapping_add(0x9e37_79b9))?;
    let mut g = disjoint_union(&left, &right);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut a: Vec<VertexId> = (0..k).collect();
    let mut b: Vec<VertexId> = (k..2 * k).collect();
    a.shuffle(&mut rng);
    b.shuffle(&mut rng);
    for i in 0..cross_edges {
        g.add_edge(a[i], b[i])?;
    }
    Ok(g)
}

/// `a` on `0..a.n()` followed by `b` shifted by `a.n()`; edge ids keep order.
pub fn disjoint_union(a: &Graph, b: &Graph) -> Graph {
    let mut g = Graph::new(a.n() + b.n());
    for &(u, v) in a.edges() {
        g.add_edge(u, v).expect("in range");
    }
    for &(u, v) in b.edges() {
        g.add_edge(u + a.n(), v + a.n()).expect("in range");
    }
    g
}

/// Sparse connected random graph with maximum degree at most `max_degree`:
/// a random spanning tree plus `extra` random edges, skipping any edge that
/// would exceed the cap.
pub fn gen_bounded_degree(n: usize, extra: usize, max_degree: usize, seed: u64) -> Result<Graph> {
    if n < 2 || max_degree < 3 {
        return invalid("need n >= 2 and max_degree >= 3");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<VertexId> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut g = Graph::new(n);
    for i in 1..n {
        // attach to an earlier vertex that still has room
        loop {
            let j = rng.gen_range(0..i);
            if g.degree(order[j]) < max_degree {
                g.add_edge(order[j], order[i])?;
                break;
            }
        }
    }
    for _ in 0..extra {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v && g.degree(u) < max_degree && g.degree(v) < max_degree {
            g.add_edge(u, v)?;
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{boundary_size, Cut};

    #[test]
    fn dumbbell_counts() {
        let g = gen_dumbbell(4).unwrap();
        assert_eq!((g.n(), g.m()), (8, 13));
        assert_eq!(gen_dumbbell(8).unwrap().m(), 57);
    }

    #[test]
    fn hypercube_counts() {
        let g = gen_hypercube(3).unwrap();
        assert_eq!((g.n(), g.m()), (8, 12));
        assert!((0..8).all(|v| g.degree(v) == 3));
    }

    #[test]
    fn planted_has_exact_cross_edges() {
        let g = gen_planted(8, 2, 7).unwrap();
        assert_eq!(g.n(), 16);
        let left = Cut::from_vertices(16, &(0..8).collect::<Vec<_>>()).unwrap();
        assert_eq!(boundary_size(&g, &left), 2);
        assert!(g.max_degree() <= PLANTED_DEGREE + 1);
        assert_eq!(g, gen_planted(8, 2, 7).unwrap());
    }

    #[test]
    fn random_regular_is_simple_and_regular() {
        let g = gen_random_regular(40, 6, 3).unwrap();
        assert!((0..40).all(|v| g.degree(v) == 6));
        let mut seen = std::collections::HashSet::new();
        for &(u, v) in g.edges() {
            assert_ne!(u, v);
            assert!(seen.insert((u.min(v), u.max(v))));
        }
        assert_eq!(g, gen_random_regular(40, 6, 3).unwrap());
    }

    #[test]
    fn infeasible_parameters() {
        assert!(gen_random_regular(5, 3, 0).is_err());
        assert!(gen_random_regular(4, 4, 0).is_err());
        assert!(gen_planted(3, 4, 0).is_err());
        assert!(gen_dumbbell(1).is_err());
        assert!(gen_hypercube(0).is_err());
    }

    #[test]
    fn bounded_degree_graph_is_connected_and_capped() {
        for seed in 0..20 {
            let g = gen_bounded_degree(50, 80, 5, seed).unwrap();
            assert!(g.is_connected());
            assert!(g.max_degree() <= 5);
        }
    }
}
