//! Size and sparsity measurements of separator quasi-bushes.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{QbNode, SeparatorQuasiBush};
use crate::graph::ColoredGraph;
use crate::wcol::{sat_pow, wcol_of_order, wreach_all, Inequality, VertexOrder};

/// Representative vertex of a non-root node: the vertex of a leaf, the
/// largest element of an internal tuple.
fn rep(
    nodes: &[QbNode],
    leaves: &BTreeMap<usize, usize>,
    ord: &VertexOrder,
    x: usize,
) -> Option<usize> {
    match leaves.get(&x) {
        Some(&v) => Some(v),
        None => nodes[x].tuple.iter().copied().max_by_key(|&v| ord.rank(v)),
    }
}

/// Order on node ids: root first, then by rank of the representative,
/// internal nodes before leaves, then tuples compared rank-wise.
pub fn rep_order(s: &SeparatorQuasiBush, ord: &VertexOrder) -> VertexOrder {
    let mut ids: Vec<usize> = (0..s.nodes.len()).collect();
    ids.sort_by_key(|&x| {
        let ranks: Vec<usize> = s.nodes[x].tuple.iter().map(|&v| ord.rank(v)).collect();
        (
            x != 0,
            rep(&s.nodes, &s.leaves, ord, x).map(|v| ord.rank(v)),
            s.leaves.contains_key(&x),
            ranks,
        )
    });
    VertexOrder::from_sequence(ids).expect("node ids form a permutation")
}

/// Number of adjacent non-root node pairs (tree edges and pointers) whose
/// representatives are not weakly `2r`-reachable from one another in either
/// direction, with the first such pair.
pub fn check_rep_adjacency(
    s: &SeparatorQuasiBush,
    g: &ColoredGraph,
    ord: &VertexOrder,
) -> (usize, Option<(usize, usize)>) {
    let wr = wreach_all(g, ord, 2 * s.r);
    let mut pairs: Vec<(usize, usize)> = s.pointers.iter().copied().collect();
    pairs.extend(
        s.nodes
            .iter()
            .enumerate()
            .filter_map(|(id, n)| n.parent.map(|p| (id, p))),
    );
    let mut count = 0;
    let mut first = None;
    for (x, y) in pairs {
        let (Some(a), Some(b)) = (
            rep(&s.nodes, &s.leaves, ord, x),
            rep(&s.nodes, &s.leaves, ord, y),
        ) else {
            continue;
        };
        if !wr[a].contains(&b) && !wr[b].contains(&a) {
            count += 1;
            first.get_or_insert((x, y));
        }
    }
    (count, first)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QbStats {
    pub r: usize,
    pub nodes: usize,
    pub pointers: usize,
    pub depth: usize,
    /// Largest `|M[v]|`; plays the role of the exponent `c` below.
    pub max_m: usize,
    pub max_alpha: usize,
    /// `wcol_s(Gaifman, rep order) <= 1 + wcol_{2sr} * (wcol_{2r}^c + 1)`
    /// for `s = 1, 2`.
    pub inequalities: Vec<Inequality>,
    pub rep_adjacency_violations: usize,
}

impl QbStats {
    pub fn holds(&self) -> bool {
        self.rep_adjacency_violations == 0 && self.inequalities.iter().all(|i| i.holds)
    }
}

pub fn quasibush_stats(s: &SeparatorQuasiBush, g: &ColoredGraph, ord: &VertexOrder) -> QbStats {
    let r = s.r;
    let max_m = s.nodes.iter().map(|n| n.tuple.len()).max().unwrap_or(0);
    let gaif = s.gaifman();
    let order = rep_order(s, ord);
    let w2r = wcol_of_order(g, ord, 2 * r) as u128;
    let inequalities = [1, 2]
        .into_iter()
        .map(|sr| {
            let lhs = wcol_of_order(&gaif, &order, sr) as u128;
            let w = wcol_of_order(g, ord, 2 * sr * r) as u128;
            let rhs = w
                .saturating_mul(sat_pow(w2r, max_m).saturating_add(1))
                .saturating_add(1);
            Inequality::new(
                format!(
                    "wcol_{sr}(qbush) <= 1+wcol_{}*(wcol_{}^{max_m}+1)",
                    2 * sr * r,
                    2 * r
                ),
                lhs,
                rhs,
            )
        })
        .collect();
    QbStats {
        r,
        nodes: s.nodes.len(),
        pointers: s.pointers.len(),
        depth: s.depth(),
        max_m,
        max_alpha: s.max_alpha(),
        inequalities,
        rep_adjacency_violations: check_rep_adjacency(s, g, ord).0,
    }
}
