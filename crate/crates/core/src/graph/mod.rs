//! Colored graphs, directed graphs and basic structural measures.

mod io;
mod metrics;
mod star;
mod treedepth;

pub(crate) use io::is_identifier;
pub use io::{load_graph, write_graph};
pub use metrics::{ball, ball_in, bfs_distances, degeneracy, degeneracy_ordering, is_r_separated};
pub use star::{is_star_coloring, star_coloring};
pub(crate) use treedepth::SubsetTreedepth;
pub use treedepth::{treedepth, treedepth_with_cap, TreedepthForest, DEFAULT_TREEDEPTH_CAP};

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};

/// A finite simple undirected graph on `0..n` with named, possibly
/// overlapping, unary color classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredGraph {
    n: usize,
    adj: Vec<Vec<usize>>,
    matrix: Vec<u64>,
    words: usize,
    m: usize,
    colors: BTreeMap<String, BTreeSet<usize>>,
}

impl ColoredGraph {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        ColoredGraph {
            n,
            adj: vec![Vec::new(); n],
            matrix: vec![0; n * words],
            words,
            m: 0,
            colors: BTreeMap::new(),
        }
    }

    /// Builds a graph from an edge list, rejecting loops, duplicates and
    /// out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = ColoredGraph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_edges(n, &edges).expect("path edges are valid")
    }

    pub fn cycle(n: usize) -> Self {
        let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        if n >= 3 {
            edges.push((0, n - 1));
        }
        Self::from_edges(n, &edges).expect("cycle edges are valid")
    }

    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Self::from_edges(n, &edges).expect("clique edges are valid")
    }

    /// The star with center 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> Self {
        let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
        Self::from_edges(leaves + 1, &edges).expect("star edges are valid")
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        for w in [u, v] {
            if w >= self.n {
                return Err(Error::OutOfRange {
                    vertex: w,
                    n: self.n,
                });
            }
        }
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        if self.has_edge(u, v) {
            return Err(Error::DuplicateEdge(u.min(v), u.max(v)));
        }
        self.matrix[u * self.words + v / 64] |= 1 << (v % 64);
        self.matrix[v * self.words + u / 64] |= 1 << (u % 64);
        let pos = self.adj[u].binary_search(&v).unwrap_err();
        self.adj[u].insert(pos, v);
        let pos = self.adj[v].binary_search(&u).unwrap_err();
        self.adj[v].insert(pos, u);
        self.m += 1;
        Ok(())
    }

    /// Adds `vertices` to the color class `name`, creating it if needed.
    pub fn add_color<I>(&mut self, name: &str, vertices: I) -> Result<()>
    where
        I: IntoIterator<Item = usize>,
    {
        let class = self.colors.entry(name.to_string()).or_default();
        for v in vertices {
            if v >= self.n {
                return Err(Error::OutOfRange {
                    vertex: v,
                    n: self.n,
                });
            }
            class.insert(v);
        }
        Ok(())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.matrix[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    /// Neighbors of `v` in increasing vertex order.
    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, nb)| nb.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn colors(&self) -> &BTreeMap<String, BTreeSet<usize>> {
        &self.colors
    }

    pub fn color(&self, name: &str) -> Option<&BTreeSet<usize>> {
        self.colors.get(name)
    }

    /// Membership test; a color that does not exist contains nothing.
    pub fn has_color(&self, name: &str, v: usize) -> bool {
        self.colors.get(name).is_some_and(|c| c.contains(&v))
    }

    /// Induced subgraph on `vertices` (deduplicated and sorted), relabeled to
    /// `0..k`. Returns the subgraph and the new-to-old vertex map.
    pub fn induced(&self, vertices: &[usize]) -> (ColoredGraph, Vec<usize>) {
        let mut keep: Vec<usize> = vertices.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in keep.iter().enumerate() {
            index[v] = i;
        }
        let mut sub = ColoredGraph::new(keep.len());
        for (i, &v) in keep.iter().enumerate() {
            for &w in &self.adj[v] {
                let j = index[w];
                if j != usize::MAX && i < j {
                    sub.add_edge(i, j).expect("induced edges are simple");
                }
            }
        }
        for (name, class) in &self.colors {
            let members: Vec<usize> = class
                .iter()
                .filter_map(|&v| (index[v] != usize::MAX).then_some(index[v]))
                .collect();
            sub.colors
                .insert(name.clone(), members.into_iter().collect());
        }
        (sub, keep)
    }

    /// The symmetric digraph with both orientations of every edge.
    pub fn to_digraph(&self) -> DirectedGraph {
        let mut d = DirectedGraph::new(self.n);
        for (u, v) in self.edges() {
            d.add_arc(u, v);
            d.add_arc(v, u);
        }
        d
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                let u = comp[i];
                i += 1;
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }
}

/// A directed graph on `0..n`. Loops are never produced by the constructions
/// in this crate, but the type does not forbid them.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct DirectedGraph {
    pub n: usize,
    pub arcs: BTreeSet<(usize, usize)>,
}

impl DirectedGraph {
    pub fn new(n: usize) -> Self {
        DirectedGraph {
            n,
            arcs: BTreeSet::new(),
        }
    }

    pub fn add_arc(&mut self, u: usize, v: usize) {
        self.arcs.insert((u, v));
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.arcs.contains(&(u, v))
    }

    /// Arcs with both endpoints in `set`; vertex ids are kept.
    pub fn restricted_to(&self, set: &BTreeSet<usize>) -> DirectedGraph {
        DirectedGraph {
            n: self.n,
            arcs: self
                .arcs
                .iter()
                .copied()
                .filter(|(u, v)| set.contains(u) && set.contains(v))
                .collect(),
        }
    }

    /// The first arc (in lexicographic order) present in exactly one of the
    /// two graphs, with a flag telling whether it belongs to `self`.
    pub fn first_difference(&self, other: &DirectedGraph) -> Option<((usize, usize), bool)> {
        let a = self.arcs.difference(&other.arcs).next().copied();
        let b = other.arcs.difference(&self.arcs).next().copied();
        match (a, b) {
            (Some(x), Some(y)) if y < x => Some((y, false)),
            (Some(x), _) => Some((x, true)),
            (None, Some(y)) => Some((y, false)),
            (None, None) => None,
        }
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(u, _) in &self.arcs {
            deg[u] += 1;
        }
        deg
    }

    /// Underlying undirected simple graph (loops dropped).
    pub fn underlying(&self) -> ColoredGraph {
        let mut g = ColoredGraph::new(self.n);
        for &(u, v) in &self.arcs {
            if u != v && !g.has_edge(u, v) {
                g.add_edge(u, v).expect("arc endpoints are in range");
            }
        }
        g
    }

    pub fn to_json(&self) -> serde_json::Value {
        let arcs: Vec<[usize; 2]> = self.arcs.iter().map(|&(u, v)| [u, v]).collect();
        serde_json::json!({ "n": self.n, "arcs": arcs })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        #[derive(serde::Deserialize)]
        struct Raw {
            n: usize,
            arcs: Vec<[usize; 2]>,
        }
        let raw: Raw = serde_json::from_value(value.clone())?;
        let mut d = DirectedGraph::new(raw.n);
        for [u, v] in raw.arcs {
            if u >= raw.n || v >= raw.n {
                return Err(Error::OutOfRange {
                    vertex: u.max(v),
                    n: raw.n,
                });
            }
            d.add_arc(u, v);
        }
        Ok(d)
    }
}
