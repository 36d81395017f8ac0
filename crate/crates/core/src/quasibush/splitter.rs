//! The splitter process: per source vertex, repeatedly pick the smallest
//! vertex of the remaining `r`-ball and delete short connecting paths.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{ball_in, bfs_distances, is_r_separated, ColoredGraph};
use crate::par;
use crate::wcol::{wreach_all, VertexOrder};

/// One run of the process from `source`.
///
/// `m` lists the chosen vertices in discovery order. `paths[(i, k)]` (with
/// 0-based `i <= k`) joins `m[i]` and `m[k]` inside the graph of step `i`.
/// `separators[k]` is the union of all paths among the first `k` chosen
/// vertices, so `separators[0]` is empty and the last entry is the full
/// separator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplitterTrace {
    pub source: usize,
    pub m: Vec<usize>,
    pub paths: Vec<((usize, usize), Vec<usize>)>,
    pub separators: Vec<BTreeSet<usize>>,
}

impl SplitterTrace {
    /// The first `k` chosen vertices (all of them when `k` is larger).
    pub fn prefix(&self, k: usize) -> &[usize] {
        &self.m[..k.min(self.m.len())]
    }

    /// The separator after `k` steps, saturating at the last one.
    pub fn separator(&self, k: usize) -> &BTreeSet<usize> {
        &self.separators[k.min(self.m.len())]
    }

    pub fn path(&self, i: usize, k: usize) -> Option<&[usize]> {
        self.paths
            .iter()
            .find(|(key, _)| *key == (i, k))
            .map(|(_, p)| p.as_slice())
    }
}

/// Lexicographically smallest (by rank) simple path from `a` to `b` with at
/// most `budget` edges.
pub fn canonical_path(
    h: &ColoredGraph,
    ord: &VertexOrder,
    a: usize,
    b: usize,
    budget: usize,
) -> Result<Vec<usize>> {
    ord.check_size(h)?;
    for x in [a, b] {
        if x >= h.n() {
            return Err(Error::OutOfRange {
                vertex: x,
                n: h.n(),
            });
        }
    }
    path_within(h, ord, &|_| true, a, b, budget)
}

/// [`canonical_path`] inside the subgraph induced by `allowed`.
pub(crate) fn path_within(
    g: &ColoredGraph,
    ord: &VertexOrder,
    allowed: &dyn Fn(usize) -> bool,
    a: usize,
    b: usize,
    budget: usize,
) -> Result<Vec<usize>> {
    let no_path = Error::NoPath {
        from: a,
        to: b,
        budget,
    };
    if !allowed(a) || !allowed(b) {
        return Err(no_path);
    }
    let to_b = bfs_distances(g, b, budget, allowed);
    if to_b[a].is_none() {
        return Err(no_path);
    }
    let mut path = vec![a];
    let mut on_path = vec![false; g.n()];
    on_path[a] = true;
    if extend(g, ord, allowed, b, budget, &to_b, &mut path, &mut on_path) {
        Ok(path)
    } else {
        Err(no_path)
    }
}

#[allow(clippy::too_many_arguments)]
fn extend(
    g: &ColoredGraph,
    ord: &VertexOrder,
    allowed: &dyn Fn(usize) -> bool,
    b: usize,
    budget: usize,
    to_b: &[Option<usize>],
    path: &mut Vec<usize>,
    on_path: &mut [bool],
) -> bool {
    let last = *path.last().expect("path is never empty");
    if last == b {
        return true;
    }
    let left = budget - (path.len() - 1);
    let mut next: Vec<usize> = g
        .neighbors(last)
        .iter()
        .copied()
        .filter(|&w| !on_path[w] && allowed(w) && to_b[w].is_some_and(|d| d < left))
        .collect();
    ord.sort(&mut next);
    for w in next {
        path.push(w);
        on_path[w] = true;
        if extend(g, ord, allowed, b, budget, to_b, path, on_path) {
            return true;
        }
        on_path[w] = false;
        path.pop();
    }
    false
}

/// Runs the process from `v`. Requires `r >= 1`.
pub fn splitter_sets(
    g: &ColoredGraph,
    ord: &VertexOrder,
    r: usize,
    v: usize,
) -> Result<SplitterTrace> {
    ord.check_size(g)?;
    if v >= g.n() {
        return Err(Error::OutOfRange {
            vertex: v,
            n: g.n(),
        });
    }
    let mut removed = vec![false; g.n()];
    // removed-set snapshots at the start of each step
    let mut snapshots: Vec<Vec<bool>> = Vec::new();
    let mut m: Vec<usize> = Vec::new();
    let mut paths = Vec::new();
    let mut separators = vec![BTreeSet::new()];
    while !removed[v] {
        snapshots.push(removed.clone());
        let k = m.len();
        let ball = ball_in(g, v, r, |w| !removed[w]);
        let mk = *ball
            .iter()
            .min_by_key(|&&w| ord.rank(w))
            .expect("ball contains v");
        m.push(mk);
        let mut sep = separators[k].clone();
        for i in 0..=k {
            let gi = &snapshots[i];
            let p = path_within(g, ord, &|w| !gi[w], m[i], mk, 2 * r)
                .map_err(|e| Error::Invariant(format!("splitter step {} from {v}: {e}", k + 1)))?;
            sep.extend(&p);
            paths.push(((i, k), p));
        }
        for &w in &sep {
            removed[w] = true;
        }
        separators.push(sep);
    }
    Ok(SplitterTrace {
        source: v,
        m,
        paths,
        separators,
    })
}

/// All traces, indexed by source vertex.
pub fn splitter_all(g: &ColoredGraph, ord: &VertexOrder, r: usize) -> Result<Vec<SplitterTrace>> {
    ord.check_size(g)?;
    par::map_range(g.n(), |v| splitter_sets(g, ord, r, v))
        .into_iter()
        .collect()
}

/// Violation counts for the three basic properties of the process:
/// `M[v] ⊆ wreach_r[v]`, `|S[v]| <= 2r |M[v]|^2`, and `M^k[v] ⊆
/// wreach_{2r}[u]` whenever `S^{k-1}[v]` does not `r`-separate `u` and `v`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SplitterReport {
    pub sources: usize,
    pub implications_checked: usize,
    pub containment_violations: usize,
    pub size_violations: usize,
    pub implication_violations: usize,
    /// First failing `(u, v, k)` of the implication, if any.
    pub witness: Option<(usize, usize, usize)>,
}

impl SplitterReport {
    pub fn holds(&self) -> bool {
        self.containment_violations == 0
            && self.size_violations == 0
            && self.implication_violations == 0
    }
}

pub fn check_splitter_properties(
    g: &ColoredGraph,
    ord: &VertexOrder,
    r: usize,
    traces: &[SplitterTrace],
) -> SplitterReport {
    let wr = wreach_all(g, ord, r);
    let wr2 = wreach_all(g, ord, 2 * r);
    let n = g.n();
    let per_source = par::map_slice(traces, |t| {
        let v = t.source;
        let mut rep = SplitterReport {
            sources: 1,
            ..Default::default()
        };
        if !t.m.iter().all(|x| wr[v].contains(x)) {
            rep.containment_violations += 1;
        }
        let bound = 2 * r * t.m.len() * t.m.len();
        if t.separator(t.m.len()).len() > bound {
            rep.size_violations += 1;
        }
        for k in 1..=t.m.len() {
            let sep = t.separator(k - 1);
            for u in 0..n {
                if is_r_separated(g, u, v, r, sep) {
                    continue;
                }
                rep.implications_checked += 1;
                if !t.prefix(k).iter().all(|x| wr2[u].contains(x)) {
                    rep.implication_violations += 1;
                    rep.witness.get_or_insert((u, v, k));
                }
            }
        }
        rep
    });
    per_source
        .into_iter()
        .fold(SplitterReport::default(), |mut acc, r| {
            acc.sources += r.sources;
            acc.implications_checked += r.implications_checked;
            acc.containment_violations += r.containment_violations;
            acc.size_violations += r.size_violations;
            acc.implication_violations += r.implication_violations;
            if acc.witness.is_none() {
                acc.witness = r.witness;
            }
            acc
        })
}
