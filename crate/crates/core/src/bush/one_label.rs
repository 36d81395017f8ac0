//! Reduction of a bush to a single leaf label by splitting the tree per
//! label under a fresh root.

use std::collections::{BTreeMap, BTreeSet};

use super::{Bush, BushNode, Label, Leaf};
use crate::error::Result;
use crate::wcol::{exact_wcol, heuristic_order, wcol_of_order, Strategy, VertexOrder};

/// The single-label bush together with the origin of each node: `None` for
/// the fresh root, otherwise the original node and the label of its copy.
#[derive(Debug, Clone)]
pub struct OneLabel {
    pub bush: Bush,
    pub origin: Vec<Option<(usize, Label)>>,
}

/// Comparison `wcol_s(B') <= |labels| * wcol_s(B) + 1` on Gaifman graphs,
/// over optimal orders when `exhaustive`, else over a degeneracy order of
/// `B` and the matching order of `B'`.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct OneLabelReport {
    pub s: usize,
    pub lhs: usize,
    pub rhs: usize,
    pub holds: bool,
    pub exhaustive: bool,
}

/// For every label `a`, copies the subtree spanned by the leaves labeled
/// `a`; copies of nodes `u, v` get an info arc when `u, v` had one, labeled
/// with the full relation on the single label iff `(a, b)` was in the
/// original label. The represented digraph is unchanged and the depth grows
/// by one.
pub fn one_label(b: &Bush) -> Result<OneLabel> {
    b.validate()?;
    let labels: BTreeSet<Label> = b.leaves.values().map(|l| l.label).collect();
    let mut copies: Vec<(usize, Label)> = Vec::new();
    for &a in &labels {
        let mut keep = BTreeSet::new();
        for (&id, l) in &b.leaves {
            if l.label == a {
                keep.extend(b.ancestors(id));
            }
        }
        copies.extend(keep.into_iter().map(|x| (x, a)));
    }
    copies.sort_by(|&(x, a), &(y, c)| {
        (b.nodes[x].depth, a, &b.nodes[x].tuple, x).cmp(&(
            b.nodes[y].depth,
            c,
            &b.nodes[y].tuple,
            y,
        ))
    });
    let index: BTreeMap<(usize, Label), usize> = copies
        .iter()
        .enumerate()
        .map(|(i, &c)| (c, i + 1))
        .collect();

    let mut nodes = vec![BushNode {
        tuple: Vec::new(),
        depth: 0,
        parent: None,
    }];
    let mut origin = vec![None];
    for &(x, a) in &copies {
        let node = &b.nodes[x];
        let mut tuple = vec![a];
        tuple.extend(&node.tuple);
        let parent = node.parent.map_or(0, |p| index[&(p, a)]);
        nodes.push(BushNode {
            tuple,
            depth: node.depth + 1,
            parent: Some(parent),
        });
        origin.push(Some((x, a)));
    }

    let leaves = b
        .leaves
        .iter()
        .map(|(&id, l)| {
            (
                index[&(id, l.label)],
                Leaf {
                    vertex: l.vertex,
                    label: 0,
                },
            )
        })
        .collect();

    let mut by_node: BTreeMap<usize, Vec<(Label, usize)>> = BTreeMap::new();
    for (&(x, a), &i) in &index {
        by_node.entry(x).or_default().push((a, i));
    }
    let mut info_arcs = BTreeMap::new();
    info_arcs.insert((0, 0), BTreeSet::new());
    for (&(u, v), rel) in &b.info_arcs {
        let (Some(us), Some(vs)) = (by_node.get(&u), by_node.get(&v)) else {
            continue;
        };
        for &(a, i) in us {
            for &(c, j) in vs {
                let label = if rel.contains(&(a, c)) {
                    BTreeSet::from([(0, 0)])
                } else {
                    BTreeSet::new()
                };
                info_arcs.insert((i, j), label);
            }
        }
    }
    let bush = Bush {
        depth: b.depth + 1,
        nodes,
        leaves,
        info_arcs,
    };
    bush.validate()?;
    Ok(OneLabel { bush, origin })
}

impl OneLabel {
    pub fn report(&self, original: &Bush, s: usize) -> OneLabelReport {
        let labels = original.label_count().max(1);
        let g_old = original.gaifman();
        let g_new = self.bush.gaifman();
        let exact_cap = 10;
        if g_new.n() <= exact_cap {
            let lhs = exact_wcol(&g_new, s).expect("within cap").0;
            let base = exact_wcol(&g_old, s)
                .expect("smaller than the split bush")
                .0;
            let rhs = labels * base + 1;
            return OneLabelReport {
                s,
                lhs,
                rhs,
                holds: lhs <= rhs,
                exhaustive: true,
            };
        }
        let old_ord = heuristic_order(&g_old, Strategy::Degeneracy);
        let mut ids: Vec<usize> = (0..self.bush.nodes.len()).collect();
        ids.sort_by_key(|&i| self.origin[i].map(|(x, a)| (old_ord.rank(x), a)));
        let new_ord = VertexOrder::from_sequence(ids).expect("node ids form a permutation");
        let lhs = wcol_of_order(&g_new, &new_ord, s);
        let rhs = labels * wcol_of_order(&g_old, &old_ord, s) + 1;
        OneLabelReport {
            s,
            lhs,
            rhs,
            holds: lhs <= rhs,
            exhaustive: false,
        }
    }
}
