//! Decremental approximate all-pairs shortest paths.
//!
//! [`ApspOracle`] is the contract the embedding loop programs against: edge
//! weights only grow, distance estimates are within a factor `alpha` of the
//! truth, and a path query returns a path whose weight is exactly the
//! distance estimate. [`DijkstraOracle`] answers every query with a fresh
//! Dijkstra run, so `alpha = 1`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, EdgeWeights, Graph, VertexId};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleStats {
    pub updates: u64,
    pub distance_queries: u64,
    pub path_queries: u64,
}

pub trait ApspOracle {
    /// Approximation factor; every estimate lies in `[d, alpha·d]`.
    fn alpha(&self) -> f64;

    fn increase_edge_weight(&mut self, e: EdgeId, delta: f64) -> Result<()>;

    /// `None` when `v` is unreachable from `u`.
    fn query_distance(&mut self, u: VertexId, v: VertexId) -> Option<f64>;

    /// Edge ids from `u` to `v`; the summed weight, accumulated in path
    /// order starting from `0.0`, equals `query_distance(u, v)` at the same
    /// state.
    fn query_path(&mut self, u: VertexId, v: VertexId) -> Option<Vec<EdgeId>>;

    fn weights(&self) -> &EdgeWeights;

    fn stats(&self) -> OracleStats;
}

/// Builds oracles over a fixed graph with all-ones initial weights.
pub trait OracleFactory {
    fn name(&self) -> &'static str;

    fn build<'g>(&self, g: &'g Graph, initial: EdgeWeights) -> Result<Box<dyn ApspOracle + 'g>>;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct DijkstraFactory;

impl OracleFactory for DijkstraFactory {
    fn name(&self) -> &'static str {
        "dijkstra"
    }

    fn build<'g>(&self, g: &'g Graph, initial: EdgeWeights) -> Result<Box<dyn ApspOracle + 'g>> {
        Ok(Box::new(DijkstraOracle::new(g, initial)?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct HeapEntry {
    dist: f64,
    vertex: VertexId,
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    // reversed: BinaryHeap is a max-heap, we pop smallest (dist, vertex)
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

const NO_PRED: usize = usize::MAX;

/// Single-source shortest path tree with deterministic tie-breaking.
#[derive(Debug, Clone)]
pub struct ShortestPathTree {
    pub source: VertexId,
    pub dist: Vec<f64>,
    /// `(predecessor vertex, edge)`; `(NO_PRED, NO_PRED)` for the source and
    /// for unreached vertices.
    pred: Vec<(VertexId, EdgeId)>,
}

impl ShortestPathTree {
    pub fn distance(&self, v: VertexId) -> Option<f64> {
        let d = self.dist[v];
        d.is_finite().then_some(d)
    }

    pub fn path_to(&self, v: VertexId) -> Option<Vec<EdgeId>> {
        self.distance(v)?;
        let mut path = Vec::new();
        let mut x = v;
        while x != self.source {
            let (p, e) = self.pred[x];
            path.push(e);
            x = p;
        }
        path.reverse();
        Some(path)
    }
}

/// Dijkstra from `source`, stopping once `target` is settled. Among equal
/// tentative distances a vertex keeps the predecessor with the smaller
/// vertex id, then the smaller edge id.
pub fn dijkstra(g: &Graph, w: &EdgeWeights, source: VertexId, target: Option<VertexId>) -> ShortestPathTree {
    let n = g.n();
    let mut dist = vec![f64::INFINITY; n];
    let mut pred = vec![(NO_PRED, NO_PRED); n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(HeapEntry { dist: 0.0, vertex: source });
    while let Some(HeapEntry { dist: d, vertex: x }) = heap.pop() {
        if done[x] || d > dist[x] {
            continue;
        }
        done[x] = true;
        if Some(x) == target {
            break;
        }
        for &(y, e) in g.neighbors(x) {
            if done[y] {
                continue;
            }
            let cand = d + w.get(e);
            let better = cand < dist[y] || (cand == dist[y] && (x, e) < pred[y]);
            if better {
                let improved = cand < dist[y];
                dist[y] = cand;
                pred[y] = (x, e);
                if improved {
                    heap.push(HeapEntry { dist: cand, vertex: y });
                }
            }
        }
    }
    ShortestPathTree { source, dist, pred }
}

/// Exact oracle recomputing distances from scratch on every query.
pub struct DijkstraOracle<'g> {
    graph: &'g Graph,
    weights: EdgeWeights,
    stats: OracleStats,
    // (u, v, update count) of the last run, reused by a following path query
    last: Option<(VertexId, VertexId, u64, ShortestPathTree)>,
}

impl<'g> DijkstraOracle<'g> {
    pub fn new(graph: &'g Graph, initial: EdgeWeights) -> Result<Self> {
        if initial.len() != graph.m() {
            return Err(Error::InvalidParameter(format!(
                "{} weights for {} edges",
                initial.len(),
                graph.m()
            )));
        }
        let initial = EdgeWeights::from_values(initial.values().to_vec())?;
        Ok(DijkstraOracle {
            graph,
            weights: initial,
            stats: OracleStats::default(),
            last: None,
        })
    }

    fn run(&mut self, u: VertexId, v: VertexId) -> &ShortestPathTree {
        let fresh = matches!(&self.last, Some((a, b, version, _)) if *a == u && *b == v && *version == self.stats.updates);
        if !fresh {
            let tree = dijkstra(self.graph, &self.weights, u, Some(v));
            self.last = Some((u, v, self.stats.updates, tree));
        }
        &self.last.as_ref().expect("just computed").3
    }

    /// Full single-source distances at the current state; read-only and
    /// uncounted, safe to call from several threads between updates.
    pub fn distances_from(&self, u: VertexId) -> Vec<f64> {
        dijkstra(self.graph, &self.weights, u, None).dist
    }
}

impl ApspOracle for DijkstraOracle<'_> {
    fn alpha(&self) -> f64 {
        1.0
    }

    fn increase_edge_weight(&mut self, e: EdgeId, delta: f64) -> Result<()> {
        if e >= self.graph.m() {
            return Err(Error::EdgeOutOfRange { edge: e, m: self.graph.m() });
        }
        if !(delta >= 0.0) {
            return Err(Error::NegativeDelta { edge: e, delta });
        }
        self.weights.add(e, delta);
        self.stats.updates += 1;
        Ok(())
    }

    fn query_distance(&mut self, u: VertexId, v: VertexId) -> Option<f64> {
        self.stats.distance_queries += 1;
        self.run(u, v).distance(v)
    }

    fn query_path(&mut self, u: VertexId, v: VertexId) -> Option<Vec<EdgeId>> {
        self.stats.path_queries += 1;
        self.run(u, v).path_to(v)
    }

    fn weights(&self) -> &EdgeWeights {
        &self.weights
    }

    fn stats(&self) -> OracleStats {
        self.stats
    }
}
