//! Integer max-flow (Dinic) used to decide coupling feasibility.
//!
//! Capacities are rational-scaled masses: callers multiply probabilities by
//! [`FLOW_SCALE`] and round, so feasibility is decided in exact integer
//! arithmetic with an explicit slack for the rounding.

/// Probability mass 1.0 in flow units.
pub const FLOW_SCALE: f64 = 1e15;

#[derive(Debug, Clone)]
struct Edge {
    to: usize,
    cap: i64,
}

/// A small Dinic max-flow network. Edges come in forward/backward pairs;
/// `edge_id ^ 1` is the reverse edge.
#[derive(Debug, Clone)]
pub struct FlowNetwork {
    adj: Vec<Vec<usize>>,
    edges: Vec<Edge>,
}

impl FlowNetwork {
    pub fn new(nodes: usize) -> Self {
        FlowNetwork {
            adj: vec![Vec::new(); nodes],
            edges: Vec::new(),
        }
    }

    /// Add a directed edge; returns its id (flow is read back from it).
    pub fn add_edge(&mut self, from: usize, to: usize, cap: i64) -> usize {
        let id = self.edges.len();
        self.edges.push(Edge { to, cap });
        self.edges.push(Edge { to: from, cap: 0 });
        self.adj[from].push(id);
        self.adj[to].push(id + 1);
        id
    }

    /// Flow currently routed through the forward edge `id`.
    pub fn flow_on(&self, id: usize) -> i64 {
        self.edges[id ^ 1].cap
    }

    pub fn max_flow(&mut self, source: usize, sink: usize) -> i64 {
        assert_ne!(source, sink);
        let n = self.adj.len();
        let mut total = 0i64;
        let mut level = vec![-1i32; n];
        let mut iter = vec![0usize; n];
        loop {
            level.fill(-1);
            level[source] = 0;
            let mut queue = std::collections::VecDeque::new();
            queue.push_back(source);
            while let Some(u) = queue.pop_front() {
                for &e in &self.adj[u] {
                    let edge = &self.edges[e];
                    if edge.cap > 0 && level[edge.to] < 0 {
                        level[edge.to] = level[u] + 1;
                        queue.push_back(edge.to);
                    }
                }
            }
            if level[sink] < 0 {
                return total;
            }
            iter.fill(0);
            loop {
                let pushed = self.dfs(source, sink, i64::MAX, &level, &mut iter);
                if pushed == 0 {
                    break;
                }
                total += pushed;
            }
        }
    }

    fn dfs(&mut self, u: usize, sink: usize, limit: i64, level: &[i32], iter: &mut [usize]) -> i64 {
        if u == sink {
            return limit;
        }
        while iter[u] < self.adj[u].len() {
            let e = self.adj[u][iter[u]];
            let (to, cap) = {
                let edge = &self.edges[e];
                (edge.to, edge.cap)
            };
            if cap > 0 && level[to] == level[u] + 1 {
                let pushed = self.dfs(to, sink, limit.min(cap), level, iter);
                if pushed > 0 {
                    self.edges[e].cap -= pushed;
                    self.edges[e ^ 1].cap += pushed;
                    return pushed;
                }
            }
            iter[u] += 1;
        }
        0
    }

    /// Nodes reachable from `source` in the residual graph (the source side
    /// of a minimum cut once `max_flow` has run).
    pub fn residual_reachable(&self, source: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        let mut stack = vec![source];
        seen[source] = true;
        while let Some(u) = stack.pop() {
            for &e in &self.adj[u] {
                let edge = &self.edges[e];
                if edge.cap > 0 && !seen[edge.to] {
                    seen[edge.to] = true;
                    stack.push(edge.to);
                }
            }
        }
        seen
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classic_max_flow() {
        // s=0, t=3; two disjoint augmenting paths plus a cross edge
        let mut net = FlowNetwork::new(4);
        net.add_edge(0, 1, 3);
        net.add_edge(0, 2, 2);
        net.add_edge(1, 2, 5);
        net.add_edge(1, 3, 2);
        net.add_edge(2, 3, 3);
        assert_eq!(net.max_flow(0, 3), 5);
    }

    #[test]
    fn min_cut_side() {
        let mut net = FlowNetwork::new(4);
        net.add_edge(0, 1, 1);
        net.add_edge(1, 2, 10);
        net.add_edge(2, 3, 10);
        net.max_flow(0, 3);
        let seen = net.residual_reachable(0);
        assert!(seen[0] && !seen[1] && !seen[2] && !seen[3]);
    }
}
