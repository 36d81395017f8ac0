//! Construction of the bush of an ordered graph and the checks tied to it.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::{Bush, BushNode, Leaf};
use crate::error::{Error, Result};
use crate::graph::{ColoredGraph, DirectedGraph};
use crate::logic::{pair_evaluator, qtype, Formula, TypeId};
use crate::par;
use crate::wcol::{sat_pow, wcol_of_order, wreach_all, Inequality, VertexOrder};

/// `first_i(v)`: the `i` smallest elements of `wreach[v]`, padded at the end
/// by repeating `v`.
fn first(wreach: &[usize], v: usize, i: usize) -> Vec<usize> {
    let mut t: Vec<usize> = wreach.iter().copied().take(i).collect();
    t.resize(i, v);
    t
}

/// Builds the bush of `(g, ord)` for the binary formula `phi`.
///
/// Leaves are labeled by the rank-`q` type of `v` followed by its leaf
/// tuple, and each info arc by the label pairs of the leaf pairs for which
/// it is the lowest arc and `phi` holds. If two such pairs share an arc and
/// labels but disagree on `phi`, `(r, q)` is inadequate and the pairs are
/// returned as the witness. On success the decoded digraph is checked
/// against the interpretation.
pub fn build_bush(
    g: &ColoredGraph,
    ord: &VertexOrder,
    r: usize,
    q: usize,
    phi: &Formula,
) -> Result<Bush> {
    ord.check_size(g)?;
    let ev = pair_evaluator(g, phi)?;
    let n = g.n();
    let wr = wreach_all(g, ord, r);
    let d = wr.iter().map(Vec::len).max().unwrap_or(0);

    let mut tuples: BTreeSet<(usize, Vec<usize>)> = BTreeSet::new();
    for v in 0..n {
        for i in 0..=d {
            tuples.insert((i, first(&wr[v], v, i)));
        }
    }
    if n == 0 {
        tuples.insert((0, Vec::new()));
    }
    let mut id_of: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut nodes = Vec::with_capacity(tuples.len());
    for (depth, tuple) in tuples {
        let parent = (depth > 0).then(|| id_of[&tuple[..depth - 1]]);
        id_of.insert(tuple.clone(), nodes.len());
        nodes.push(BushNode {
            tuple,
            depth,
            parent,
        });
    }

    let mut info_arcs: BTreeMap<(usize, usize), BTreeSet<(usize, usize)>> = BTreeMap::new();
    info_arcs.insert((0, 0), BTreeSet::new());
    let mut levels: Vec<Vec<usize>> = vec![Vec::new(); d + 1];
    for (id, node) in nodes.iter().enumerate() {
        levels[node.depth].push(id);
    }
    for level in levels.iter().skip(1) {
        for &x in level {
            let tx = &nodes[x].tuple;
            for &y in level {
                let ty = &nodes[y].tuple;
                let (mx, my) = (tx[tx.len() - 1], ty[ty.len() - 1]);
                if ty.contains(&mx) || tx.contains(&my) {
                    info_arcs.insert((x, y), BTreeSet::new());
                }
            }
        }
    }

    let leaf_tuples: Vec<Vec<usize>> = (0..n).map(|v| first(&wr[v], v, d)).collect();
    let types: Vec<TypeId> = par::map_range(n, |v| {
        let mut t = vec![v];
        t.extend(&leaf_tuples[v]);
        qtype(g, q, &t)
    })
    .into_iter()
    .collect::<Result<_>>()?;
    let mut label_of_type: HashMap<TypeId, usize> = HashMap::new();
    let labels: Vec<usize> = types
        .iter()
        .map(|t| {
            let next = label_of_type.len();
            *label_of_type.entry(*t).or_insert(next)
        })
        .collect();
    let leaf_id: Vec<usize> = leaf_tuples.iter().map(|t| id_of[t]).collect();
    let leaves = (0..n)
        .map(|v| {
            (
                leaf_id[v],
                Leaf {
                    vertex: v,
                    label: labels[v],
                },
            )
        })
        .collect();

    let mut bush = Bush {
        depth: d,
        nodes,
        leaves,
        info_arcs,
    };
    let chains: Vec<Vec<usize>> = leaf_id.iter().map(|&x| bush.ancestors(x)).collect();
    let rows: Vec<Vec<((usize, usize), bool)>> = par::map_range(n, |u| {
        (0..n)
            .map(|v| {
                (
                    bush.lowest_arc(&chains[u], &chains[v]),
                    u != v && ev.eval(&[u, v]),
                )
            })
            .collect()
    });

    let mut seen: HashMap<((usize, usize), usize, usize), (bool, usize, usize)> = HashMap::new();
    for u in 0..n {
        for v in (0..n).filter(|&v| v != u) {
            let (arc, truth) = rows[u][v];
            let key = (arc, labels[u], labels[v]);
            match seen.get(&key) {
                Some(&(t, u0, v0)) if t != truth => {
                    return Err(Error::Adequacy {
                        witness: [u0, v0, u, v],
                    })
                }
                Some(_) => {}
                None => {
                    seen.insert(key, (truth, u, v));
                }
            }
            if truth {
                bush.info_arcs
                    .get_mut(&arc)
                    .expect("lowest arcs exist")
                    .insert((labels[u], labels[v]));
            }
        }
    }

    let decoded = super::decode_bush(&bush)?;
    let mut expected = DirectedGraph::new(n);
    for (u, row) in rows.iter().enumerate() {
        for (v, &(_, truth)) in row.iter().enumerate() {
            if truth {
                expected.add_arc(u, v);
            }
        }
    }
    if let Some(((u, v), _)) = decoded.first_difference(&expected) {
        return Err(Error::Invariant(format!(
            "bush decodes differently from the formula at ({u}, {v})"
        )));
    }
    Ok(bush)
}

fn node_max(b: &Bush, x: usize) -> Option<usize> {
    b.nodes[x].tuple.last().copied()
}

/// Order on node ids: root first, then by the rank of the node's largest
/// vertex, ties by the tuple compared rank-wise, then internal before leaf.
pub fn extended_order(b: &Bush, ord: &VertexOrder) -> VertexOrder {
    let mut ids: Vec<usize> = (0..b.nodes.len()).collect();
    ids.sort_by_key(|&x| {
        let ranks: Vec<usize> = b.nodes[x].tuple.iter().map(|&v| ord.rank(v)).collect();
        (
            x != 0,
            node_max(b, x).map(|m| ord.rank(m)),
            ranks,
            b.leaves.contains_key(&x),
        )
    });
    VertexOrder::from_sequence(ids).expect("node ids form a permutation")
}

/// `wcol_s` of the Gaifman graph under [`extended_order`] against
/// `wcol_{2sr} * wcol_r * 2^wcol_{2r} + 1`.
pub fn wcol_bound(b: &Bush, g: &ColoredGraph, ord: &VertexOrder, r: usize, s: usize) -> Inequality {
    let lhs = wcol_of_order(&b.gaifman(), &extended_order(b, ord), s) as u128;
    let w2sr = wcol_of_order(g, ord, 2 * s * r) as u128;
    let wr = wcol_of_order(g, ord, r) as u128;
    let w2r = wcol_of_order(g, ord, 2 * r);
    let rhs = w2sr
        .saturating_mul(wr)
        .saturating_mul(sat_pow(2, w2r))
        .saturating_add(1);
    Inequality::new(
        format!(
            "wcol_{s}(bush) <= wcol_{}*wcol_{r}*2^wcol_{}+1",
            2 * s * r,
            2 * r
        ),
        lhs,
        rhs,
    )
}

/// The number of non-root nodes with a given largest vertex against
/// `wcol_r * 2^wcol_{2r}`.
pub fn claim_a(b: &Bush, g: &ColoredGraph, ord: &VertexOrder, r: usize) -> Inequality {
    let mut count: BTreeMap<usize, u128> = BTreeMap::new();
    for x in 1..b.nodes.len() {
        if let Some(m) = node_max(b, x) {
            *count.entry(m).or_default() += 1;
        }
    }
    let lhs = count.values().copied().max().unwrap_or(0);
    let rhs =
        (wcol_of_order(g, ord, r) as u128).saturating_mul(sat_pow(2, wcol_of_order(g, ord, 2 * r)));
    Inequality::new(
        format!("nodes per max vertex <= wcol_{r}*2^wcol_{}", 2 * r),
        lhs,
        rhs,
    )
}

/// For every pair of distinct leaves, `wreach[u] ∩ wreach[v]` is contained
/// in both endpoints of the lowest info arc above them.
pub fn check_first_separation(
    b: &Bush,
    g: &ColoredGraph,
    ord: &VertexOrder,
    r: usize,
) -> Result<()> {
    let wr = wreach_all(g, ord, r);
    let by_vertex = b.leaf_of_vertex();
    let n = g.n();
    let chains: Vec<Vec<usize>> = (0..n).map(|v| b.ancestors(by_vertex[&v])).collect();
    let bad = par::find_first(n, |u| {
        (0..n).filter(|&v| v != u).find_map(|v| {
            let (x, y) = b.lowest_arc(&chains[u], &chains[v]);
            let ok = wr[u]
                .iter()
                .filter(|w| wr[v].contains(w))
                .all(|w| b.nodes[x].tuple.contains(w) && b.nodes[y].tuple.contains(w));
            (!ok).then_some((u, v))
        })
    });
    match bad {
        Some((u, v)) => Err(Error::Invariant(format!(
            "common weak reachability of {u} and {v} is not inside their lowest info arc"
        ))),
        None => Ok(()),
    }
}

#[derive(Debug, Clone)]
pub struct AppendixReport {
    pub digraph: DirectedGraph,
    pub max_outdeg: usize,
    /// `wcol_{2r}` of the order.
    pub d: usize,
    /// `1 + d^2 * 2^d`, saturating.
    pub bound: u128,
}

/// The digraph on bush nodes with an arc `(Y, X)` for distinct `X, Y` when
/// `X` is the root or the largest vertex of `X` lies in `Y`. Fails if some
/// out-degree exceeds `1 + d^2 2^d` (`d = wcol_{2r}`) or if the Gaifman
/// graph of the bush is not contained in the underlying undirected graph.
pub fn appendix_digraph(
    b: &Bush,
    g: &ColoredGraph,
    ord: &VertexOrder,
    r: usize,
) -> Result<AppendixReport> {
    let m = b.nodes.len();
    let rows = par::map_range(m, |y| {
        let ty = &b.nodes[y].tuple;
        (0..m)
            .filter(|&x| x != y)
            .filter(|&x| match node_max(b, x) {
                None => true,
                Some(mx) => ty.contains(&mx),
            })
            .collect::<Vec<_>>()
    });
    let mut digraph = DirectedGraph::new(m);
    for (y, row) in rows.iter().enumerate() {
        for &x in row {
            digraph.add_arc(y, x);
        }
    }
    let max_outdeg = rows.iter().map(Vec::len).max().unwrap_or(0);
    let d = wcol_of_order(g, ord, 2 * r);
    let bound = (d as u128 * d as u128)
        .saturating_mul(sat_pow(2, d))
        .saturating_add(1);
    if max_outdeg as u128 > bound {
        return Err(Error::Invariant(format!(
            "appendix digraph out-degree {max_outdeg} exceeds {bound}"
        )));
    }
    let under = digraph.underlying();
    if let Some((u, v)) = b.gaifman().edges().find(|&(u, v)| !under.has_edge(u, v)) {
        return Err(Error::Invariant(format!(
            "bush edge {u}-{v} missing from the appendix digraph"
        )));
    }
    Ok(AppendixReport {
        digraph,
        max_outdeg,
        d,
        bound,
    })
}
