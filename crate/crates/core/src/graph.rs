//! Undirected multigraphs with stable edge ids, vertex cuts and cut metrics.
//!
//! Self-loops and parallel edges are allowed everywhere. A self-loop adds 2 to
//! the degree (and hence the volume) of its vertex and never crosses a cut.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(VertexId, VertexId)>,
    adjacency: Vec<Vec<(VertexId, EdgeId)>>,
    degree: Vec<usize>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            n,
            edges: Vec::new(),
            adjacency: vec![Vec::new(); n],
            degree: vec![0; n],
        }
    }

    pub fn from_edges(n: usize, edges: &[(VertexId, VertexId)]) -> Result<Self> {
        let mut g = Graph::new(n);
        g.edges.reserve(edges.len());
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Appends an edge and returns its id.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<EdgeId> {
        for x in [u, v] {
            if x >= self.n {
                return Err(Error::VertexOutOfRange { vertex: x, n: self.n });
            }
        }
        let id = self.edges.len();
        self.edges.push((u, v));
        self.adjacency[u].push((v, id));
        if u != v {
            self.adjacency[v].push((u, id));
        }
        self.degree[u] += 1;
        self.degree[v] += 1;
        Ok(id)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.edges[e]
    }

    /// `(neighbor, edge id)` pairs in insertion order; a self-loop appears once.
    pub fn neighbors(&self, v: VertexId) -> &[(VertexId, EdgeId)] {
        &self.adjacency[v]
    }

    /// Degree with self-loops counted twice.
    pub fn degree(&self, v: VertexId) -> usize {
        self.degree[v]
    }

    pub fn max_degree(&self) -> usize {
        self.degree.iter().copied().max().unwrap_or(0)
    }

    /// Total volume, always `2m`.
    pub fn volume(&self) -> usize {
        2 * self.m()
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for &(y, _) in &self.adjacency[x] {
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        count == self.n
    }
}

/// A vertex subset `S` together with its cached size.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cut {
    side: Vec<bool>,
    size: usize,
}

impl Cut {
    pub fn from_membership(side: Vec<bool>) -> Self {
        let size = side.iter().filter(|&&b| b).count();
        Cut { side, size }
    }

    pub fn from_vertices(n: usize, vertices: &[VertexId]) -> Result<Self> {
        let mut side = vec![false; n];
        for &v in vertices {
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            side[v] = true;
        }
        Ok(Cut::from_membership(side))
    }

    /// Cut whose membership is the bit pattern of `mask` (bit `i` = vertex `i`).
    pub fn from_mask(n: usize, mask: u64) -> Self {
        Cut::from_membership((0..n).map(|i| mask >> i & 1 == 1).collect())
    }

    pub fn n(&self) -> usize {
        self.side.len()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.side[v]
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn complement_size(&self) -> usize {
        self.side.len() - self.size
    }

    /// `∅ ⊊ S ⊊ V`.
    pub fn is_proper(&self) -> bool {
        self.size > 0 && self.size < self.side.len()
    }

    pub fn complement(&self) -> Cut {
        Cut {
            side: self.side.iter().map(|b| !b).collect(),
            size: self.side.len() - self.size,
        }
    }

    pub fn membership(&self) -> &[bool] {
        &self.side
    }

    pub fn vertices(&self) -> Vec<VertexId> {
        (0..self.side.len()).filter(|&v| self.side[v]).collect()
    }

    pub fn volume(&self, g: &Graph) -> usize {
        self.vertices().into_iter().map(|v| g.degree(v)).sum()
    }
}

/// Edges with exactly one endpoint in `s`, in ascending edge-id order.
pub fn boundary_edges(g: &Graph, s: &Cut) -> Vec<EdgeId> {
    g.edges()
        .iter()
        .enumerate()
        .filter(|(_, &(u, v))| s.contains(u) != s.contains(v))
        .map(|(e, _)| e)
        .collect()
}

pub fn boundary_size(g: &Graph, s: &Cut) -> usize {
    g.edges()
        .iter()
        .filter(|&&(u, v)| s.contains(u) != s.contains(v))
        .count()
}

fn check_proper(g: &Graph, s: &Cut) -> Result<()> {
    if s.n() != g.n() {
        return invalid(format!("cut over {} vertices used on graph with {}", s.n(), g.n()));
    }
    if !s.is_proper() {
        return invalid("cut side must be a nonempty proper subset");
    }
    Ok(())
}

/// `|E(S, V∖S)| / min(|S|, |V∖S|)`.
pub fn sparsity(g: &Graph, s: &Cut) -> Result<f64> {
    check_proper(g, s)?;
    let smaller = s.size().min(s.complement_size());
    Ok(boundary_size(g, s) as f64 / smaller as f64)
}

/// `|E(S, V∖S)| / min(vol(S), vol(V∖S))`.
pub fn conductance(g: &Graph, s: &Cut) -> Result<f64> {
    check_proper(g, s)?;
    let vol = s.volume(g);
    let smaller = vol.min(g.volume() - vol);
    if smaller == 0 {
        return invalid("cut side has zero volume");
    }
    Ok(boundary_size(g, s) as f64 / smaller as f64)
}

/// Per-edge real weights, all at least 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeWeights {
    values: Vec<f64>,
    integral: bool,
}

impl EdgeWeights {
    pub fn ones(m: usize) -> Self {
        EdgeWeights {
            values: vec![1.0; m],
            integral: false,
        }
    }

    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        for (edge, &weight) in values.iter().enumerate() {
            if !(weight >= 1.0) || !weight.is_finite() {
                return Err(Error::WeightBelowOne { edge, weight });
            }
        }
        Ok(EdgeWeights {
            values,
            integral: false,
        })
    }

    /// Integral weights; rejects non-integer entries.
    pub fn from_integers(values: Vec<f64>) -> Result<Self> {
        if let Some(e) = values.iter().position(|w| w.fract() != 0.0) {
            return invalid(format!("weight {} on edge {e} is not integral", values[e]));
        }
        let mut w = EdgeWeights::from_values(values)?;
        w.integral = true;
        Ok(w)
    }

    /// Entry-wise round-up; the result is flagged integral.
    pub fn ceil(&self) -> EdgeWeights {
        EdgeWeights {
            values: self.values.iter().map(|w| w.ceil()).collect(),
            integral: true,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, e: EdgeId) -> f64 {
        self.values[e]
    }

    /// Multiplies the weight of `e` by `factor >= 1`.
    pub fn scale(&mut self, e: EdgeId, factor: f64) {
        debug_assert!(factor >= 1.0);
        self.values[e] *= factor;
        self.integral = false;
    }

    pub fn add(&mut self, e: EdgeId, delta: f64) {
        debug_assert!(delta >= 0.0);
        self.values[e] += delta;
        self.integral = false;
    }

    pub fn is_integral(&self) -> bool {
        self.integral
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn l1(&self) -> f64 {
        self.values.iter().sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{gen_dumbbell, gen_random_regular};
    use proptest::prelude::*;

    fn c4() -> Graph {
        Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap()
    }

    fn k4() -> Graph {
        crate::gen::complete_graph(4)
    }

    #[test]
    fn boundary_examples() {
        let g = c4();
        let s = Cut::from_vertices(4, &[0]).unwrap();
        assert_eq!(boundary_edges(&g, &s), vec![0, 3]);

        let s = Cut::from_vertices(4, &[0, 1]).unwrap();
        assert_eq!(boundary_edges(&k4(), &s).len(), 4);

        let d8 = gen_dumbbell(4).unwrap();
        let s = Cut::from_vertices(8, &[0, 1, 2, 3]).unwrap();
        let b = boundary_edges(&d8, &s);
        assert_eq!(b.len(), 1);
        let (u, v) = d8.edge(b[0]);
        assert!(u < 4 && v >= 4);
    }

    #[test]
    fn sparsity_and_conductance_examples() {
        let s0 = Cut::from_vertices(4, &[0]).unwrap();
        assert_eq!(sparsity(&c4(), &s0).unwrap(), 2.0);
        assert_eq!(conductance(&c4(), &s0).unwrap(), 1.0);

        let d8 = gen_dumbbell(4).unwrap();
        let half = Cut::from_vertices(8, &[0, 1, 2, 3]).unwrap();
        assert_eq!(sparsity(&d8, &half).unwrap(), 0.25);
        assert_eq!(conductance(&d8, &half).unwrap(), 1.0 / 13.0);

        let s01 = Cut::from_vertices(4, &[0, 1]).unwrap();
        assert_eq!(sparsity(&k4(), &s01).unwrap(), 2.0);
        assert_eq!(conductance(&k4(), &s01).unwrap(), 4.0 / 6.0);
    }

    #[test]
    fn improper_cut_rejected() {
        let g = c4();
        assert!(sparsity(&g, &Cut::from_vertices(4, &[]).unwrap()).is_err());
        assert!(conductance(&g, &Cut::from_vertices(4, &[0, 1, 2, 3]).unwrap()).is_err());
        assert!(sparsity(&g, &Cut::from_vertices(3, &[0]).unwrap()).is_err());
    }

    #[test]
    fn self_loops_count_twice_in_degree() {
        let g = Graph::from_edges(2, &[(0, 0), (0, 1)]).unwrap();
        assert_eq!(g.degree(0), 3);
        assert_eq!(g.neighbors(0).len(), 2);
        assert_eq!(g.max_degree(), 3);
        assert_eq!(g.volume(), 4);
    }

    #[test]
    fn bad_endpoint_rejected() {
        assert!(matches!(
            Graph::from_edges(2, &[(0, 2)]),
            Err(Error::VertexOutOfRange { vertex: 2, n: 2 })
        ));
    }

    #[test]
    fn weights_ceil_sets_integral() {
        let w = EdgeWeights::from_values(vec![1.0, 1.2, 3.0]).unwrap();
        assert!(!w.is_integral());
        let c = w.ceil();
        assert!(c.is_integral());
        assert_eq!(c.values(), &[1.0, 2.0, 3.0]);
        assert!(EdgeWeights::from_values(vec![0.5]).is_err());
    }

    fn arb_graph() -> impl Strategy<Value = (Graph, Vec<bool>)> {
        (2usize..12).prop_flat_map(|n| {
            (
                prop::collection::vec((0..n, 0..n), 0..30),
                prop::collection::vec(any::<bool>(), n),
            )
                .prop_map(move |(edges, side)| (Graph::from_edges(n, &edges).unwrap(), side))
        })
    }

    proptest! {
        #[test]
        fn boundary_symmetric_under_complement((g, side) in arb_graph()) {
            let s = Cut::from_membership(side);
            prop_assert_eq!(boundary_edges(&g, &s), boundary_edges(&g, &s.complement()));
        }

        #[test]
        fn self_loops_never_cross((g, side) in arb_graph(), loops in prop::collection::vec(0usize..12, 0..8)) {
            let s = Cut::from_membership(side);
            let mut with_loops = g.clone();
            for v in loops.into_iter().filter(|&v| v < g.n()) {
                with_loops.add_edge(v, v).unwrap();
            }
            prop_assert_eq!(boundary_edges(&g, &s), boundary_edges(&with_loops, &s));
            if s.is_proper() {
                prop_assert_eq!(sparsity(&g, &s).unwrap(), sparsity(&with_loops, &s).unwrap());
            }
        }

        #[test]
        fn sparsity_within_degree_of_conductance(seed in 0u64..200, side in prop::collection::vec(any::<bool>(), 12)) {
            let g = gen_random_regular(12, 3, seed).unwrap();
            let s = Cut::from_membership(side);
            prop_assume!(s.is_proper());
            let psi = sparsity(&g, &s).unwrap();
            let phi = conductance(&g, &s).unwrap();
            // vol(T) <= Δ|T| for either side, so Φ >= Ψ/Δ and Φ <= Ψ for Δ-regular with Δ >= 1.
            let delta = g.max_degree() as f64;
            prop_assert!(phi * delta >= psi - 1e-12);
            prop_assert!(phi <= psi + 1e-12);
        }
    }
}
