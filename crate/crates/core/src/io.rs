//! Edge-list and DIMACS text formats.
//!
//! Edge list: a header line `n m` followed by `m` lines `u v [weight]` with
//! 0-indexed vertices. Blank lines and lines starting with `#` are ignored.
//!
//! DIMACS: `c` comment lines, one `p <kind> n m` line, then `e u v` (or
//! `a u v [w]`) lines with 1-indexed vertices.

use crate::error::{Error, Result};
use crate::graph::{EdgeWeights, Graph};

fn parse_err<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        line,
        msg: msg.into(),
    })
}

fn field<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    match tok {
        None => parse_err(line, format!("missing {what}")),
        Some(t) => t
            .parse()
            .or_else(|_| parse_err(line, format!("malformed {what} `{t}`"))),
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub fn read_edge_list(text: &str) -> Result<Graph> {
    read_weighted_edge_list(text).map(|(g, _)| g)
}

/// Parses an edge list; weights are returned only if every edge line has one.
pub fn read_weighted_edge_list(text: &str) -> Result<(Graph, Option<EdgeWeights>)> {
    let mut lines = content_lines(text);
    let (hline, header) = match lines.next() {
        Some(h) => h,
        None => return parse_err(1, "missing header `n m`"),
    };
    let mut toks = header.split_whitespace();
    let n: usize = field(toks.next(), hline, "vertex count")?;
    let m: usize = field(toks.next(), hline, "edge count")?;
    if toks.next().is_some() {
        return parse_err(hline, "trailing tokens in header");
    }
    let mut g = Graph::new(n);
    let mut weights = Vec::with_capacity(m);
    let mut last_line = hline;
    for (lineno, line) in lines {
        last_line = lineno;
        if g.m() == m {
            return parse_err(lineno, format!("more than the declared {m} edges"));
        }
        let mut toks = line.split_whitespace();
        let u: usize = field(toks.next(), lineno, "endpoint")?;
        let v: usize = field(toks.next(), lineno, "endpoint")?;
        if let Some(w) = toks.next() {
            let w: f64 = field(Some(w), lineno, "weight")?;
            weights.push(w);
        }
        if toks.next().is_some() {
            return parse_err(lineno, "trailing tokens");
        }
        for x in [u, v] {
            if x >= n {
                return parse_err(lineno, format!("vertex {x} out of range 0..{n}"));
            }
        }
        g.add_edge(u, v)?;
    }
    if g.m() != m {
        return parse_err(last_line, format!("declared {m} edges but found {}", g.m()));
    }
    let weights = match weights.len() {
        0 => None,
        k if k == m => Some(EdgeWeights::from_values(weights)?),
        _ => return parse_err(hline, "weight column present on some lines only"),
    };
    Ok((g, weights))
}

/// Canonical form: header then one `u v` line per edge in edge-id order.
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.m());
    for &(u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

pub fn read_dimacs(text: &str) -> Result<Graph> {
    let mut graph: Option<(Graph, usize)> = None;
    for (lineno, line) in text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())) {
        let mut toks = line.split_whitespace();
        match toks.next() {
            None | Some("c") => {}
            Some("p") => {
                if graph.is_some() {
                    return parse_err(lineno, "duplicate problem line");
                }
                let _kind: String = field(toks.next(), lineno, "problem kind")?;
                let n: usize = field(toks.next(), lineno, "vertex count")?;
                let m: usize = field(toks.next(), lineno, "edge count")?;
                graph = Some((Graph::new(n), m));
            }
            Some("e") | Some("a") => {
                let Some((g, _)) = graph.as_mut() else {
                    return parse_err(lineno, "edge before problem line");
                };
                let u: usize = field(toks.next(), lineno, "endpoint")?;
                let v: usize = field(toks.next(), lineno, "endpoint")?;
                for x in [u, v] {
                    if x == 0 || x > g.n() {
                        return parse_err(lineno, format!("vertex {x} out of range 1..={}", g.n()));
                    }
                }
                g.add_edge(u - 1, v - 1)?;
            }
            Some(other) => return parse_err(lineno, format!("unknown line type `{other}`")),
        }
    }
    match graph {
        None => parse_err(1, "missing problem line"),
        Some((g, m)) if g.m() != m => {
            parse_err(text.lines().count(), format!("declared {m} edges but found {}", g.m()))
        }
        Some((g, _)) => Ok(g),
    }
}
