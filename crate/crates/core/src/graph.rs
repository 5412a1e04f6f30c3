//! Small simple graphs stored as adjacency bitmasks.

use std::fmt;

use crate::map::EmbeddedMap;

/// Vertex limit for [`Graph`].
pub const MAX_GRAPH_VERTICES: usize = 16;

/// A simple undirected graph on at most 16 vertices.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Graph {
    n: u8,
    adj: [u16; MAX_GRAPH_VERTICES],
}

impl Graph {
    pub fn new(n: usize) -> Self {
        assert!(n <= MAX_GRAPH_VERTICES, "graphs are limited to {MAX_GRAPH_VERTICES} vertices");
        Graph { n: n as u8, adj: [0; MAX_GRAPH_VERTICES] }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    /// The underlying graph of a map. Panics above 16 vertices.
    pub fn from_map(map: &EmbeddedMap) -> Self {
        let mut g = Graph::new(map.vertex_count());
        for (_, u, v) in map.edge_list() {
            g.add_edge(u, v);
        }
        g
    }

    pub fn complete(n: usize) -> Self {
        Graph::new(n).complement()
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Graph::new(n);
        for i in 0..n {
            g.add_edge(i, (i + 1) % n);
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let mut g = Graph::new(n);
        for i in 1..n {
            g.add_edge(i - 1, i);
        }
        g
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn neighbors_mask(&self, v: usize) -> u16 {
        self.adj[v]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u] & (1 << v) != 0
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u != v && u < self.order() && v < self.order());
        self.adj[u] |= 1 << v;
        self.adj[v] |= 1 << u;
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.adj[u] &= !(1 << v);
        self.adj[v] &= !(1 << u);
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn min_degree(&self) -> usize {
        (0..self.order()).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        (0..self.order()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        (0..self.order()).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    /// Neighbors of `v` in increasing order.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> {
        BitIter(self.adj[v] as u32)
    }

    /// Edges `(u, v)` with `u < v`, lexicographically.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.order() {
            for v in self.neighbors(u).filter(|&v| v > u) {
                out.push((u, v));
            }
        }
        out
    }

    pub fn complement(&self) -> Self {
        let n = self.order();
        let all = if n == 16 { u16::MAX } else { (1u16 << n) - 1 };
        let mut g = *self;
        for v in 0..n {
            g.adj[v] = all & !self.adj[v] & !(1 << v);
        }
        g
    }

    /// Renames vertex `v` to `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut g = Graph::new(self.order());
        for (u, v) in self.edges() {
            g.add_edge(perm[u], perm[v]);
        }
        g
    }

    fn reach_mask(&self, allowed: u16) -> u16 {
        if allowed == 0 {
            return 0;
        }
        let mut seen = allowed & allowed.wrapping_neg();
        let mut frontier = seen;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let fresh = self.adj[v] & allowed & !seen;
            seen |= fresh;
            frontier |= fresh;
        }
        seen
    }

    fn all_mask(&self) -> u16 {
        if self.n == 16 {
            u16::MAX
        } else {
            (1u16 << self.n) - 1
        }
    }

    pub fn is_connected(&self) -> bool {
        let all = self.all_mask();
        self.reach_mask(all) == all
    }

    /// True when the graph has more than 3 vertices and stays connected after
    /// deleting any two of them.
    pub fn is_three_connected(&self) -> bool {
        let n = self.order();
        if n < 4 || !self.is_connected() {
            return false;
        }
        let all = self.all_mask();
        for a in 0..n {
            for b in a + 1..n {
                let rest = all & !(1 << a) & !(1 << b);
                if self.reach_mask(rest) != rest {
                    return false;
                }
            }
        }
        true
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph({}; {:?})", self.n, self.edges())
    }
}

/// Iterates the set bits of a mask, lowest first.
#[derive(Clone, Copy)]
pub(crate) struct BitIter(pub u32);

impl Iterator for BitIter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            let i = self.0.trailing_zeros() as usize;
            self.0 &= self.0 - 1;
            Some(i)
        }
    }
}
