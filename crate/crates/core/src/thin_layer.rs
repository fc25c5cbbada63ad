//! Ball growing on integer edge weights.
//!
//! For a center `z` and integer radius `r`, `B(z, r)` is the set of vertices
//! at weighted distance at most `r`. The potential `Φ(z, r)` sums, over all
//! edges, how much of the edge lies inside the ball, so with integer weights
//! `Φ(z, r+1) − Φ(z, r)` is exactly the number of edges leaving `B(z, r)`.
//! A radius is *thin* when
//!
//! ```text
//! D · |E(B, V∖B)| <= 4 · log₂‖ŵ‖₁ · Φ(z, r)
//! ```
//!
//! Whenever the two centers are more than `D` apart one of them has a thin
//! radius below `D/2` whose ball holds at most half of the vertices.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::{invalid, Error, Result};
use crate::graph::{Cut, EdgeWeights, Graph, VertexId};

/// Relative slack applied toward acceptance in the thin-layer test.
const THIN_SLACK: f64 = 1e-12;

/// Ball state for one center, advanced radius by radius.
#[derive(Debug, Clone)]
pub struct BallGrowth<'a> {
    graph: &'a Graph,
    weights: &'a [u64],
    alive: &'a [bool],
    pub center: VertexId,
    pub radius: u64,
    /// Exact `Φ(center, radius)`.
    pub potential: u128,
    /// `|E(B, V∖B)|` at the current radius.
    pub boundary: u64,
    in_ball: Vec<bool>,
    members: Vec<VertexId>,
    dist: Vec<u64>,
    heap: BinaryHeap<Reverse<(u64, VertexId)>>,
}

impl<'a> BallGrowth<'a> {
    fn new(graph: &'a Graph, weights: &'a [u64], alive: &'a [bool], center: VertexId) -> Self {
        let n = graph.n();
        let mut dist = vec![u64::MAX; n];
        dist[center] = 0;
        let mut heap = BinaryHeap::new();
        heap.push(Reverse((0, center)));
        let mut ball = BallGrowth {
            graph,
            weights,
            alive,
            center,
            radius: 0,
            potential: 0,
            boundary: 0,
            in_ball: vec![false; n],
            members: Vec::new(),
            dist,
            heap,
        };
        ball.absorb_up_to(0);
        ball
    }

    pub fn ball_size(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[VertexId] {
        &self.members
    }

    /// Distance of the next vertex to join, if any.
    fn next_event(&mut self) -> Option<u64> {
        while let Some(&Reverse((d, x))) = self.heap.peek() {
            if self.in_ball[x] || d > self.dist[x] {
                self.heap.pop();
            } else {
                return Some(d);
            }
        }
        None
    }

    fn absorb_up_to(&mut self, r: u64) {
        while let Some(d) = self.next_event() {
            if d > r {
                break;
            }
            let Reverse((_, x)) = self.heap.pop().expect("peeked");
            self.in_ball[x] = true;
            self.members.push(x);
            for &(y, e) in self.graph.neighbors(x) {
                if y == x || !self.alive[y] {
                    continue;
                }
                if self.in_ball[y] {
                    self.boundary -= 1;
                } else {
                    self.boundary += 1;
                    let cand = d + self.weights[e];
                    if cand < self.dist[y] {
                        self.dist[y] = cand;
                        self.heap.push(Reverse((cand, y)));
                    }
                }
            }
        }
    }

    /// Moves to radius `r >= self.radius`.
    pub fn advance_to(&mut self, r: u64) {
        while self.radius < r {
            let step_end = match self.next_event() {
                Some(d) if d < r => d,
                _ => r,
            };
            self.potential += self.boundary as u128 * (step_end - self.radius) as u128;
            self.radius = step_end;
            self.absorb_up_to(step_end);
        }
    }

    fn thin(&self, d: u64, log_norm: f64) -> bool {
        (d as f64) * (self.boundary as f64) <= 4.0 * log_norm * self.potential as f64 * (1.0 + THIN_SLACK)
    }

    /// Whether the current radius qualifies as output.
    fn qualifies(&self, d: u64, log_norm: f64, alive_count: usize) -> bool {
        self.radius >= 1 && 2 * self.ball_size() <= alive_count && self.thin(d, log_norm)
    }

    /// Smallest radius `> self.radius` at which this side might qualify, or
    /// `None` if it never can (ball already too large).
    fn next_candidate(&mut self, d: u64, log_norm: f64, alive_count: usize) -> Option<u64> {
        if 2 * self.ball_size() > alive_count {
            return None;
        }
        let r = self.radius.max(1);
        let event = self.next_event();
        if self.boundary == 0 {
            return Some(if self.radius >= 1 { self.radius + 1 } else { 1 });
        }
        // within the current segment Φ grows linearly with slope `boundary`
        let need = d as f64 * self.boundary as f64 / (4.0 * log_norm * (1.0 + THIN_SLACK));
        let gap = ((need - self.potential as f64) / self.boundary as f64).ceil();
        let mut target = if gap <= 1.0 { self.radius + 1 } else { self.radius + gap as u64 };
        target = target.max(r).max(self.radius + 1);
        if let Some(ev) = event {
            target = target.min(ev.max(self.radius + 1));
        }
        Some(target)
    }
}

/// A thin ball returned by [`find_thin_layer`].
#[derive(Debug, Clone, PartialEq)]
pub struct ThinLayer {
    pub cut: Cut,
    pub center: VertexId,
    pub radius: u64,
    pub potential: u128,
    pub potential_next: u128,
    /// Edges leaving the ball inside the graph searched.
    pub boundary: u64,
    /// Total weight of edges with at least one endpoint in the ball.
    pub incident_weight: u64,
    /// `log₂‖ŵ‖₁` of the graph searched.
    pub log_norm: f64,
}

impl ThinLayer {
    /// The guarantee `|E(S, V∖S)| <= 4·ŵ(S)·log₂‖ŵ‖₁/D`.
    pub fn satisfies_bound(&self, d: u64) -> bool {
        self.boundary as f64 * d as f64 <= 4.0 * self.incident_weight as f64 * self.log_norm * (1.0 + THIN_SLACK)
    }
}

fn integral_weights(w: &EdgeWeights) -> Result<Vec<u64>> {
    w.values()
        .iter()
        .enumerate()
        .map(|(e, &x)| {
            if x.fract() != 0.0 || x < 1.0 || x > 2f64.powi(52) {
                Err(Error::InvalidParameter(format!("weight {x} on edge {e} is not a positive integer")))
            } else {
                Ok(x as u64)
            }
        })
        .collect()
}

/// Finds a thin ball around `u` or `v` in `g` under integer weights `w`.
///
/// Requires `dist_w(u, v) > d` and `d > 4·log₂‖w‖₁`.
pub fn find_thin_layer(g: &Graph, w: &EdgeWeights, u: VertexId, v: VertexId, d: u64) -> Result<ThinLayer> {
    let alive = vec![true; g.n()];
    let weights = integral_weights(w)?;
    find_thin_layer_within(g, &weights, &alive, u, v, d)
}

/// [`find_thin_layer`] on the subgraph induced by `alive`.
pub fn find_thin_layer_within(
    g: &Graph,
    weights: &[u64],
    alive: &[bool],
    u: VertexId,
    v: VertexId,
    d: u64,
) -> Result<ThinLayer> {
    for x in [u, v] {
        if x >= g.n() {
            return Err(Error::VertexOutOfRange { vertex: x, n: g.n() });
        }
        if !alive[x] {
            return invalid(format!("vertex {x} is not in the searched subgraph"));
        }
    }
    let alive_count = alive.iter().filter(|&&a| a).count();
    let norm: u128 = g
        .edges()
        .iter()
        .zip(weights)
        .filter(|(&(a, b), _)| alive[a] && alive[b])
        .map(|(_, &w)| w as u128)
        .sum();
    let log_norm = (norm.max(1) as f64).log2();
    if !((d as f64) > 4.0 * log_norm) {
        return invalid(format!("D = {d} must exceed 4·log₂‖ŵ‖₁ = {}", 4.0 * log_norm));
    }
    if let Some(dist) = bounded_distance(g, weights, alive, u, v, d) {
        return invalid(format!("dist({u}, {v}) = {dist} is not above D = {d}"));
    }

    let mut sides = [
        BallGrowth::new(g, weights, alive, u),
        BallGrowth::new(g, weights, alive, v),
    ];
    let mut r = 1u64;
    loop {
        for side in sides.iter_mut() {
            side.advance_to(r);
            if side.qualifies(d, log_norm, alive_count) {
                return Ok(finish(g, weights, alive, side, log_norm));
            }
        }
        let next = sides
            .iter_mut()
            .filter_map(|s| s.next_candidate(d, log_norm, alive_count))
            .min();
        match next {
            Some(n) if n > r => r = n,
            Some(_) => r += 1,
            None => {
                return Err(Error::Invariant(format!(
                    "no thin layer around {u} or {v} with D = {d}"
                )))
            }
        }
    }
}

fn finish(g: &Graph, weights: &[u64], alive: &[bool], side: &BallGrowth<'_>, log_norm: f64) -> ThinLayer {
    let mut membership = vec![false; g.n()];
    for &x in side.members() {
        membership[x] = true;
    }
    let incident_weight = g
        .edges()
        .iter()
        .zip(weights)
        .filter(|(&(a, b), _)| alive[a] && alive[b] && (membership[a] || membership[b]))
        .map(|(_, &w)| w)
        .sum();
    ThinLayer {
        cut: Cut::from_membership(membership),
        center: side.center,
        radius: side.radius,
        potential: side.potential,
        potential_next: side.potential + side.boundary as u128,
        boundary: side.boundary,
        incident_weight,
        log_norm,
    }
}

/// `Some(dist)` if `v` is within `limit` of `u` inside `alive`.
fn bounded_distance(g: &Graph, weights: &[u64], alive: &[bool], u: VertexId, v: VertexId, limit: u64) -> Option<u64> {
    let mut dist = vec![u64::MAX; g.n()];
    let mut heap = BinaryHeap::new();
    dist[u] = 0;
    heap.push(Reverse((0u64, u)));
    while let Some(Reverse((d, x))) = heap.pop() {
        if d > dist[x] {
            continue;
        }
        if x == v {
            return Some(d);
        }
        for &(y, e) in g.neighbors(x) {
            let cand = d + weights[e];
            if alive[y] && cand <= limit && cand < dist[y] {
                dist[y] = cand;
                heap.push(Reverse((cand, y)));
            }
        }
    }
    None
}
