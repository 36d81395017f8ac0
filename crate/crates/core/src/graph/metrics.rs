use std::collections::{BTreeSet, VecDeque};

use super::ColoredGraph;

/// Breadth-first distances from `src` up to `limit`, restricted to vertices
/// accepted by `allowed`. Unreached vertices are `None`.
///
/// `src` itself is always reached, even if `allowed(src)` is false.
pub fn bfs_distances<F>(
    g: &ColoredGraph,
    src: usize,
    limit: usize,
    allowed: F,
) -> Vec<Option<usize>>
where
    F: Fn(usize) -> bool,
{
    let mut dist = vec![None; g.n()];
    dist[src] = Some(0);
    let mut queue = VecDeque::from([src]);
    while let Some(u) = queue.pop_front() {
        let d = dist[u].expect("queued vertices have distances");
        if d == limit {
            continue;
        }
        for &w in g.neighbors(u) {
            if dist[w].is_none() && allowed(w) {
                dist[w] = Some(d + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Vertices at distance at most `r` from `v`.
pub fn ball(g: &ColoredGraph, v: usize, r: usize) -> BTreeSet<usize> {
    ball_in(g, v, r, |_| true)
}

/// Ball of radius `r` around `v` in the subgraph induced by `allowed`.
pub fn ball_in<F>(g: &ColoredGraph, v: usize, r: usize, allowed: F) -> BTreeSet<usize>
where
    F: Fn(usize) -> bool,
{
    bfs_distances(g, v, r, allowed)
        .into_iter()
        .enumerate()
        .filter_map(|(u, d)| d.map(|_| u))
        .collect()
}

/// Whether every `u`-`v` path of length at most `r` meets `sep`.
///
/// An endpoint lying in `sep` counts as meeting it, so the answer is `true`
/// whenever `u` or `v` is in `sep`.
pub fn is_r_separated(
    g: &ColoredGraph,
    u: usize,
    v: usize,
    r: usize,
    sep: &BTreeSet<usize>,
) -> bool {
    if sep.contains(&u) || sep.contains(&v) {
        return true;
    }
    bfs_distances(g, u, r, |w| !sep.contains(&w))[v].is_none()
}

/// Min-degree peeling order (ties by vertex id) and the degeneracy.
pub fn degeneracy_ordering(g: &ColoredGraph) -> (usize, Vec<usize>) {
    let n = g.n();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut queue: BTreeSet<(usize, usize)> = (0..n).map(|v| (deg[v], v)).collect();
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut k = 0;
    while let Some((d, v)) = queue.pop_first() {
        k = k.max(d);
        removed[v] = true;
        order.push(v);
        for &w in g.neighbors(v) {
            if !removed[w] {
                queue.remove(&(deg[w], w));
                deg[w] -= 1;
                queue.insert((deg[w], w));
            }
        }
    }
    (k, order)
}

pub fn degeneracy(g: &ColoredGraph) -> usize {
    degeneracy_ordering(g).0
}
