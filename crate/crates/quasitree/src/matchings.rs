//! Perfect-matching counts for ladders and caterpillar products.
//!
//! `P2 x Pn` has `f_{n+1}` perfect matchings; `P2 x Tn`, where `Tn` is the
//! caterpillar made of an (n-1)-path with one extra leaf on its second
//! vertex, has `l_{n-1}` — the same count as the quasi-trees of the
//! corresponding bouquet family.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {0} out of range for {1} vertices")]
    VertexOutOfRange(usize, usize),
    #[error("loop at vertex {0} is not allowed in a simple graph")]
    LoopEdge(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("malformed edge list line: {0}")]
    MalformedText(String),
}

/// Simple undirected graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl SimpleGraph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<SimpleGraph, GraphError> {
        let mut normalized = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u >= n {
                return Err(GraphError::VertexOutOfRange(u, n));
            }
            if v >= n {
                return Err(GraphError::VertexOutOfRange(v, n));
            }
            if u == v {
                return Err(GraphError::LoopEdge(u));
            }
            normalized.push((u.min(v), u.max(v)));
        }
        normalized.sort_unstable();
        for pair in normalized.windows(2) {
            if pair[0] == pair[1] {
                return Err(GraphError::DuplicateEdge(pair[0].0, pair[0].1));
            }
        }
        Ok(SimpleGraph {
            n,
            edges: normalized,
        })
    }

    /// Path on `n` vertices (`n = 0` gives the empty graph).
    pub fn path(n: usize) -> SimpleGraph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        SimpleGraph::new(n, &edges).unwrap()
    }

    /// The caterpillar `Tn` (`n >= 3`): a path on vertices `1..n` plus the
    /// leaf `0` attached to vertex `2`. Removing the leaf gives an
    /// (n-1)-path; removing the leaf and its support isolates vertex 1 and
    /// leaves an (n-3)-path.
    pub fn caterpillar(n: usize) -> SimpleGraph {
        assert!(n >= 3, "the caterpillar needs at least 3 vertices");
        let mut edges = vec![(0, 2), (1, 2)];
        edges.extend((3..n).map(|i| (i - 1, i)));
        SimpleGraph::new(n, &edges).unwrap()
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Edge list text, one `u v` pair per line.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for &(u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    pub fn from_edge_list(text: &str) -> Result<SimpleGraph, GraphError> {
        let mut edges = Vec::new();
        let mut max = 0usize;
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let bad = || GraphError::MalformedText(line.to_string());
            let u: usize = it.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
            let v: usize = it.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
            if it.next().is_some() {
                return Err(bad());
            }
            max = max.max(u).max(v);
            edges.push((u, v));
        }
        let n = if edges.is_empty() { 0 } else { max + 1 };
        SimpleGraph::new(n, &edges)
    }
}

/// Cartesian product `P2 x G`: two copies of `G` plus a rung per vertex.
/// Copy A keeps vertex ids, copy B is shifted by `|V(G)|`.
pub fn grid_product(g: &SimpleGraph) -> SimpleGraph {
    let n = g.n_vertices();
    let mut edges = Vec::with_capacity(2 * g.edges().len() + n);
    for &(u, v) in g.edges() {
        edges.push((u, v));
        edges.push((u + n, v + n));
    }
    for v in 0..n {
        edges.push((v, v + n));
    }
    SimpleGraph::new(2 * n, &edges).unwrap()
}

/// Exact perfect-matching count by branching on the lowest unmatched vertex.
/// The empty graph has one (empty) perfect matching; odd orders give 0.
pub fn count_perfect_matchings(g: &SimpleGraph) -> u64 {
    let n = g.n_vertices();
    if !n.is_multiple_of(2) {
        return 0;
    }
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in g.edges() {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut matched = vec![false; n];
    count_from(&adj, &mut matched, 0)
}

fn count_from(adj: &[Vec<usize>], matched: &mut [bool], from: usize) -> u64 {
    let v = match (from..adj.len()).find(|&v| !matched[v]) {
        Some(v) => v,
        None => return 1,
    };
    matched[v] = true;
    let mut total = 0;
    for &u in &adj[v] {
        if !matched[u] {
            matched[u] = true;
            total += count_from(adj, matched, v + 1);
            matched[u] = false;
        }
    }
    matched[v] = false;
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladder_base_cases() {
        assert_eq!(count_perfect_matchings(&grid_product(&SimpleGraph::path(1))), 1);
        assert_eq!(count_perfect_matchings(&grid_product(&SimpleGraph::path(2))), 2);
        assert_eq!(count_perfect_matchings(&grid_product(&SimpleGraph::path(3))), 3);
    }

    #[test]
    fn ladder_counts_are_fibonacci() {
        use crate::sequences::fibonacci;
        use num_bigint::BigInt;
        for n in 1..=12 {
            let ladder = grid_product(&SimpleGraph::path(n));
            assert_eq!(
                BigInt::from(count_perfect_matchings(&ladder)),
                fibonacci(n as u64 + 1),
                "n = {n}"
            );
        }
    }

    #[test]
    fn caterpillar_shape() {
        let t7 = SimpleGraph::caterpillar(7);
        assert_eq!(t7.n_vertices(), 7);
        assert_eq!(t7.edges().len(), 6);
        // degree sequence: one degree-3 spine vertex, two leaves at it
        let mut deg = vec![0usize; 7];
        for &(u, v) in t7.edges() {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg.sort_unstable();
        assert_eq!(deg, [1, 1, 1, 2, 2, 2, 3]);
    }

    #[test]
    fn caterpillar_counts_are_lucas() {
        use crate::sequences::lucas;
        use num_bigint::BigInt;
        for n in 3..=12 {
            let g = grid_product(&SimpleGraph::caterpillar(n));
            assert_eq!(
                BigInt::from(count_perfect_matchings(&g)),
                lucas(n as u64 - 1),
                "n = {n}"
            );
        }
    }

    #[test]
    fn caterpillar_decomposition() {
        for n in 3..=12 {
            let whole = count_perfect_matchings(&grid_product(&SimpleGraph::caterpillar(n)));
            let a = count_perfect_matchings(&grid_product(&SimpleGraph::path(n - 1)));
            let b = count_perfect_matchings(&grid_product(&SimpleGraph::path(n - 3)));
            assert_eq!(whole, a + b, "n = {n}");
        }
    }

    #[test]
    fn degenerate_counts() {
        assert_eq!(count_perfect_matchings(&SimpleGraph::path(0)), 1);
        assert_eq!(count_perfect_matchings(&SimpleGraph::path(3)), 0);
        assert_eq!(count_perfect_matchings(&SimpleGraph::path(4)), 1);
        // even order but an isolated vertex
        let g = SimpleGraph::new(4, &[(0, 1)]).unwrap();
        assert_eq!(count_perfect_matchings(&g), 0);
    }

    #[test]
    fn product_of_p1_is_a_single_edge() {
        let g = grid_product(&SimpleGraph::path(1));
        assert_eq!(g.n_vertices(), 2);
        assert_eq!(g.edges(), &[(0, 1)]);
        // and P2 x P2 is the 4-cycle
        let c4 = grid_product(&SimpleGraph::path(2));
        assert_eq!(c4.edges().len(), 4);
    }

    #[test]
    fn edge_list_round_trip() {
        let g = grid_product(&SimpleGraph::caterpillar(4));
        let text = g.to_edge_list();
        assert_eq!(SimpleGraph::from_edge_list(&text).unwrap(), g);
        assert!(matches!(
            SimpleGraph::from_edge_list("1 2 3").unwrap_err(),
            GraphError::MalformedText(_)
        ));
    }

    #[test]
    fn construction_guards() {
        assert_eq!(SimpleGraph::new(2, &[(0, 0)]).unwrap_err(), GraphError::LoopEdge(0));
        assert_eq!(
            SimpleGraph::new(2, &[(0, 1), (1, 0)]).unwrap_err(),
            GraphError::DuplicateEdge(0, 1)
        );
        assert_eq!(
            SimpleGraph::new(2, &[(0, 5)]).unwrap_err(),
            GraphError::VertexOutOfRange(5, 2)
        );
    }
}
