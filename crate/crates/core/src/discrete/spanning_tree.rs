//! Weighted random spanning trees.
//!
//! Sampling uses Wilson's algorithm: loop-erased random walks with
//! weight-proportional steps, which draws exactly from the law
//! `nu_w(T) ~ prod_{e in T} w(e)`. The exact law on small graphs comes
//! from direct enumeration of edge subsets and is the oracle for the
//! goodness-of-fit and concentration tests.

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::measures::BooleanMeasure;

/// Maximum edge count for exact tree enumeration.
pub const ENUMERATION_EDGE_CAP: usize = 20;

/// Draw a weighted random spanning tree; returns the sorted edge indices.
///
/// The walk from a vertex picks an incident edge with probability
/// proportional to its weight, so parallel edges are handled naturally.
pub fn sample_spanning_tree<R: Rng>(g: &Graph, rng: &mut R) -> Result<Vec<usize>> {
    if !g.is_connected() {
        return Err(Error::DisconnectedGraph);
    }
    let n = g.vertex_count();
    let incidence = g.incidence();
    let totals: Vec<f64> = incidence
        .iter()
        .map(|edges| edges.iter().map(|&e| g.edges()[e].2).sum())
        .collect();

    // next_edge[u] = last edge used to leave u; overwriting on revisits
    // performs the loop erasure.
    let mut in_tree = vec![false; n];
    let mut next_edge = vec![usize::MAX; n];
    let root = 0;
    in_tree[root] = true;
    for start in 0..n {
        let mut u = start;
        while !in_tree[u] {
            let mut pick = rng.random::<f64>() * totals[u];
            let mut chosen = *incidence[u].last().expect("connected graph has no isolated vertex");
            for &e in &incidence[u] {
                pick -= g.edges()[e].2;
                if pick <= 0.0 {
                    chosen = e;
                    break;
                }
            }
            next_edge[u] = chosen;
            let (a, b, _) = g.edges()[chosen];
            u = if a == u { b } else { a };
        }
        let mut u = start;
        while !in_tree[u] {
            in_tree[u] = true;
            let (a, b, _) = g.edges()[next_edge[u]];
            u = if a == u { b } else { a };
        }
    }

    let mut tree: Vec<usize> = (0..n).filter(|&u| u != root).map(|u| next_edge[u]).collect();
    tree.sort_unstable();
    debug_assert_eq!(tree.len(), n - 1);
    Ok(tree)
}

/// The exact weighted spanning-tree law as a measure on edge indicators.
pub fn enumerate_spanning_trees(g: &Graph) -> Result<BooleanMeasure> {
    let m = g.edge_count();
    if m > ENUMERATION_EDGE_CAP {
        return Err(Error::CapExceeded {
            n: m,
            cap: ENUMERATION_EDGE_CAP,
        });
    }
    if !g.is_connected() {
        return Err(Error::DisconnectedGraph);
    }
    let n = g.vertex_count();
    let mut weights = vec![0.0; 1 << m];
    let size = n - 1;
    // iterate over all edge subsets of size |V|-1
    let mut subset: Vec<usize> = (0..size).collect();
    if size == 0 {
        weights[0] = 1.0;
        return BooleanMeasure::from_unnormalized_with_cap(m.max(1), weights, ENUMERATION_EDGE_CAP);
    }
    if size > m {
        return Err(Error::InvalidGraph(
            "fewer edges than a spanning tree needs".into(),
        ));
    }
    loop {
        if spans(g, &subset) {
            let mask: usize = subset.iter().map(|&e| 1 << e).sum();
            weights[mask] = subset.iter().map(|&e| g.edges()[e].2).product();
        }
        // next combination
        let mut i = size;
        loop {
            if i == 0 {
                return BooleanMeasure::from_unnormalized_with_cap(m, weights, ENUMERATION_EDGE_CAP);
            }
            i -= 1;
            if subset[i] != i + m - size {
                break;
            }
        }
        subset[i] += 1;
        for j in i + 1..size {
            subset[j] = subset[j - 1] + 1;
        }
    }
}

/// Whether the edge subset of size |V|-1 forms a spanning tree (connected
/// and acyclic, decided by union-find).
fn spans(g: &Graph, subset: &[usize]) -> bool {
    let n = g.vertex_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut merged = 0;
    for &e in subset {
        let (u, v, _) = g.edges()[e];
        let ru = find(&mut parent, u);
        let rv = find(&mut parent, v);
        if ru == rv {
            return false;
        }
        parent[ru] = rv;
        merged += 1;
    }
    merged == n - 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeededRng;

    #[test]
    fn path_graph_has_unique_tree() {
        let g = Graph::path(3).unwrap();
        let mut rng = SeededRng::new(1).rng();
        for _ in 0..10 {
            assert_eq!(sample_spanning_tree(&g, &mut rng).unwrap(), vec![0, 1]);
        }
        let m = enumerate_spanning_trees(&g).unwrap();
        assert!((m.mass(0b11) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn triangle_enumeration() {
        let g = Graph::cycle(3).unwrap();
        let m = enumerate_spanning_trees(&g).unwrap();
        assert_eq!(m.support().len(), 3);
        for mask in m.support() {
            assert!((m.mass(mask) - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn weighted_triangle_enumeration() {
        let g = Graph::new(3, vec![(0, 1, 2.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap();
        let m = enumerate_spanning_trees(&g).unwrap();
        // tree omitting e1 has weight 1, the others 2; total 5
        assert!((m.mass(0b110) - 0.2).abs() < 1e-15);
        assert!((m.mass(0b101) - 0.4).abs() < 1e-15);
        assert!((m.mass(0b011) - 0.4).abs() < 1e-15);
    }

    #[test]
    fn k4_has_sixteen_trees() {
        let g = Graph::complete(4).unwrap();
        let m = enumerate_spanning_trees(&g).unwrap();
        assert_eq!(m.support().len(), 16);
        for mask in m.support() {
            assert!((m.mass(mask) - 1.0 / 16.0).abs() < 1e-15);
        }
    }

    #[test]
    fn samples_are_trees() {
        let g = Graph::complete(5).unwrap();
        let mut rng = SeededRng::new(7).rng();
        for _ in 0..200 {
            let t = sample_spanning_tree(&g, &mut rng).unwrap();
            assert_eq!(t.len(), 4);
            assert!(spans(&g, &t));
        }
    }

    #[test]
    fn disconnected_graph_rejected() {
        let g = Graph::unit(4, &[(0, 1), (2, 3)]).unwrap();
        let mut rng = SeededRng::new(1).rng();
        assert!(matches!(
            sample_spanning_tree(&g, &mut rng),
            Err(Error::DisconnectedGraph)
        ));
        assert!(matches!(
            enumerate_spanning_trees(&g),
            Err(Error::DisconnectedGraph)
        ));
    }

    #[test]
    fn parallel_edges_sampled_proportionally() {
        // two parallel edges with weights 3 and 1: trees are {e0} and {e1}
        let g = Graph::new(2, vec![(0, 1, 3.0), (0, 1, 1.0)]).unwrap();
        let exact = enumerate_spanning_trees(&g).unwrap();
        assert!((exact.mass(0b01) - 0.75).abs() < 1e-15);
        let mut rng = SeededRng::new(3).rng();
        let mut count = 0;
        let trials = 20_000;
        for _ in 0..trials {
            if sample_spanning_tree(&g, &mut rng).unwrap() == vec![0] {
                count += 1;
            }
        }
        let p = count as f64 / trials as f64;
        assert!((p - 0.75).abs() < 0.01, "p = {p}");
    }
}
