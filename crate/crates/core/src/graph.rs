//! Finite weighted multigraphs with stable edge indices.
//!
//! Edges are stored in insertion order and addressed by index everywhere:
//! spanning-tree samplers return edge-index sets, and edge-indicator
//! measures put coordinate `j` on edge `j`.

use crate::error::{Error, Result};

/// An undirected weighted multigraph. Self-loops are rejected; parallel
/// edges are allowed and keep distinct indices.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<(usize, usize, f64)>,
}

impl Graph {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::InvalidGraph("graph needs at least one vertex".into()));
        }
        for &(u, v, w) in &edges {
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {u}")));
            }
            if u >= vertex_count || v >= vertex_count {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u},{v}) outside vertex range 0..{vertex_count}"
                )));
            }
            if !(w > 0.0) || !w.is_finite() {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u},{v}) has non-positive weight {w}"
                )));
            }
        }
        Ok(Graph {
            vertex_count,
            edges,
        })
    }

    /// Unit-weight graph from an edge list.
    pub fn unit(vertex_count: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        Self::new(
            vertex_count,
            pairs.iter().map(|&(u, v)| (u, v, 1.0)).collect(),
        )
    }

    /// Complete graph on `n` vertices, unit weights.
    pub fn complete(n: usize) -> Result<Self> {
        let mut pairs = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                pairs.push((u, v));
            }
        }
        Self::unit(n, &pairs)
    }

    /// Path on `n` vertices.
    pub fn path(n: usize) -> Result<Self> {
        Self::unit(n, &(0..n - 1).map(|i| (i, i + 1)).collect::<Vec<_>>())
    }

    /// Cycle on `n` vertices.
    pub fn cycle(n: usize) -> Result<Self> {
        let mut pairs: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
        pairs.push((n - 1, 0));
        Self::unit(n, &pairs)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    /// Incident edge indices per vertex.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.vertex_count];
        for (i, &(u, v, _)) in self.edges.iter().enumerate() {
            inc[u].push(i);
            inc[v].push(i);
        }
        inc
    }

    pub fn is_connected(&self) -> bool {
        if self.vertex_count == 0 {
            return false;
        }
        let inc = self.incidence();
        let mut seen = vec![false; self.vertex_count];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &e in &inc[u] {
                let (a, b, _) = self.edges[e];
                let w = if a == u { b } else { a };
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.vertex_count
    }

    /// Degree of every vertex in the subgraph selected by an edge mask.
    pub fn degrees_for_mask(&self, mask: usize) -> Vec<usize> {
        let mut deg = vec![0usize; self.vertex_count];
        for (i, &(u, v, _)) in self.edges.iter().enumerate() {
            if mask >> i & 1 == 1 {
                deg[u] += 1;
                deg[v] += 1;
            }
        }
        deg
    }

    /// Parse the text format: one `u v weight` triple per line, vertices
    /// 0-based; blank lines and lines starting with `#` are skipped. The
    /// vertex count is one past the largest index seen.
    pub fn parse(text: &str) -> Result<Self> {
        let mut edges = Vec::new();
        let mut max_vertex = 0usize;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(Error::Parse(format!(
                    "line {}: expected `u v weight`, got {line:?}",
                    lineno + 1
                )));
            }
            let u: usize = fields[0]
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: bad vertex {:?}", lineno + 1, fields[0])))?;
            let v: usize = fields[1]
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: bad vertex {:?}", lineno + 1, fields[1])))?;
            let w: f64 = fields[2]
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: bad weight {:?}", lineno + 1, fields[2])))?;
            max_vertex = max_vertex.max(u).max(v);
            edges.push((u, v, w));
        }
        if edges.is_empty() {
            return Err(Error::Parse("graph file has no edges".into()));
        }
        Graph::new(max_vertex + 1, edges)
    }

    pub fn read_file(path: &std::path::Path) -> Result<Self> {
        Graph::parse(&std::fs::read_to_string(path)?)
    }
}
