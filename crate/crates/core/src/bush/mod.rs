//! Bushes: rooted trees with all leaves at one depth, where the arcs of the
//! represented digraph are read off the labeled info arc lowest above a pair
//! of leaves.

mod build;
mod one_label;

pub use build::{
    appendix_digraph, build_bush, check_first_separation, claim_a, extended_order, wcol_bound,
    AppendixReport,
};
pub use one_label::{one_label, OneLabel, OneLabelReport};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{ColoredGraph, DirectedGraph};
use crate::par;

pub type Label = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BushNode {
    pub tuple: Vec<usize>,
    pub depth: usize,
    pub parent: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Leaf {
    pub vertex: usize,
    pub label: Label,
}

/// Node ids index `nodes`; node 0 is the root. Info arcs are keyed by
/// `(from, to)` and map to their relation on labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bush {
    pub depth: usize,
    pub nodes: Vec<BushNode>,
    pub leaves: BTreeMap<usize, Leaf>,
    pub info_arcs: BTreeMap<(usize, usize), BTreeSet<(Label, Label)>>,
}

impl Bush {
    /// Checks the structural invariants: a single root, consistent depths,
    /// leaves exactly at full depth, distinct leaf vertices, and an info
    /// relation that is symmetric, reflexive and depth-preserving.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Structure(msg));
        let Some(root) = self.nodes.first() else {
            return bad("bush has no root".into());
        };
        if root.depth != 0 || root.parent.is_some() {
            return bad("node 0 must be a root at depth 0".into());
        }
        let mut has_child = vec![false; self.nodes.len()];
        for (id, node) in self.nodes.iter().enumerate().skip(1) {
            let Some(p) = node.parent else {
                return bad(format!("node {id} has no parent"));
            };
            if p >= self.nodes.len() || self.nodes[p].depth + 1 != node.depth {
                return bad(format!("node {id} has an invalid parent"));
            }
            if node.depth > self.depth {
                return bad(format!("node {id} is deeper than the bush"));
            }
            has_child[p] = true;
        }
        let mut vertices = BTreeSet::new();
        for (&id, leaf) in &self.leaves {
            if id >= self.nodes.len() || self.nodes[id].depth != self.depth || has_child[id] {
                return bad(format!(
                    "leaf {id} is not a node at full depth without children"
                ));
            }
            if !vertices.insert(leaf.vertex) {
                return bad(format!("vertex {} is represented twice", leaf.vertex));
            }
        }
        let empty = self.nodes.len() == 1 && self.leaves.is_empty();
        for (id, &child) in has_child.iter().enumerate() {
            if !child && !self.leaves.contains_key(&id) && !empty {
                return bad(format!("childless node {id} is not a leaf"));
            }
        }
        for &(a, b) in self.info_arcs.keys() {
            if a >= self.nodes.len()
                || b >= self.nodes.len()
                || self.nodes[a].depth != self.nodes[b].depth
            {
                return bad(format!("info arc ({a}, {b}) joins different depths"));
            }
            if !self.info_arcs.contains_key(&(b, a)) {
                return bad(format!("info arc ({a}, {b}) has no reverse"));
            }
        }
        if let Some(id) = (0..self.nodes.len()).find(|&x| !self.info_arcs.contains_key(&(x, x))) {
            return bad(format!("node {id} has no info loop"));
        }
        Ok(())
    }

    /// `ancestors(x)[i]` is the ancestor of `x` at depth `i`.
    pub fn ancestors(&self, mut x: usize) -> Vec<usize> {
        let mut chain = vec![x];
        while let Some(p) = self.nodes[x].parent {
            chain.push(p);
            x = p;
        }
        chain.reverse();
        chain
    }

    pub fn leaf_of_vertex(&self) -> BTreeMap<usize, usize> {
        self.leaves.iter().map(|(&id, l)| (l.vertex, id)).collect()
    }

    /// Number of distinct leaf labels in use.
    pub fn label_count(&self) -> usize {
        self.leaves
            .values()
            .map(|l| l.label)
            .collect::<BTreeSet<_>>()
            .len()
    }

    /// The deepest info arc `(a, b)` with `a` above `u` and `b` above `v`,
    /// given the ancestor chains of the two leaves.
    pub(crate) fn lowest_arc(&self, anc_u: &[usize], anc_v: &[usize]) -> (usize, usize) {
        (0..anc_u.len().min(anc_v.len()))
            .rev()
            .map(|i| (anc_u[i], anc_v[i]))
            .find(|arc| self.info_arcs.contains_key(arc))
            .expect("the root info loop is always present")
    }

    /// Universe size of the decoded digraph: one past the largest vertex.
    pub fn universe(&self) -> usize {
        self.leaves
            .values()
            .map(|l| l.vertex + 1)
            .max()
            .unwrap_or(0)
    }

    /// Undirected graph on node ids with parent-child edges and info arcs,
    /// loops dropped.
    pub fn gaifman(&self) -> ColoredGraph {
        let mut g = ColoredGraph::new(self.nodes.len());
        for (id, node) in self.nodes.iter().enumerate() {
            if let Some(p) = node.parent {
                let _ = g.add_edge(p, id);
            }
        }
        for &(a, b) in self.info_arcs.keys() {
            if a != b && !g.has_edge(a, b) {
                g.add_edge(a, b).expect("info arc endpoints are nodes");
            }
        }
        g
    }

    pub fn to_json(&self) -> serde_json::Value {
        let json = BushJson {
            depth: self.depth,
            nodes: self
                .nodes
                .iter()
                .enumerate()
                .map(|(id, n)| NodeJson {
                    id,
                    tuple: n.tuple.clone(),
                    depth: n.depth,
                    parent: n.parent,
                })
                .collect(),
            leaves: self
                .leaves
                .iter()
                .map(|(&id, l)| LeafJson {
                    id,
                    vertex: l.vertex,
                    label: l.label,
                })
                .collect(),
            info_arcs: self
                .info_arcs
                .iter()
                .map(|(&(from, to), rel)| ArcJson {
                    from,
                    to,
                    label: rel.iter().map(|&(a, b)| [a, b]).collect(),
                })
                .collect(),
        };
        serde_json::to_value(json).expect("bush serializes")
    }

    /// Parses the JSON form and validates the structure.
    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let raw: BushJson = serde_json::from_value(value.clone())?;
        let mut nodes = vec![None; raw.nodes.len()];
        for n in raw.nodes {
            let slot = nodes
                .get_mut(n.id)
                .ok_or_else(|| Error::Structure(format!("node id {} out of range", n.id)))?;
            if slot.is_some() {
                return Err(Error::Structure(format!("duplicate node id {}", n.id)));
            }
            *slot = Some(BushNode {
                tuple: n.tuple,
                depth: n.depth,
                parent: n.parent,
            });
        }
        let bush = Bush {
            depth: raw.depth,
            nodes: nodes
                .into_iter()
                .map(|n| n.expect("ids are a permutation"))
                .collect(),
            leaves: raw
                .leaves
                .into_iter()
                .map(|l| {
                    (
                        l.id,
                        Leaf {
                            vertex: l.vertex,
                            label: l.label,
                        },
                    )
                })
                .collect(),
            info_arcs: raw
                .info_arcs
                .into_iter()
                .map(|a| {
                    (
                        (a.from, a.to),
                        a.label.into_iter().map(|[x, y]| (x, y)).collect(),
                    )
                })
                .collect(),
        };
        bush.validate()?;
        Ok(bush)
    }

    /// Graphviz rendering: tree edges solid, info arcs dashed with their
    /// labels, loops omitted.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph bush {\n  node [shape=box];\n");
        for (id, n) in self.nodes.iter().enumerate() {
            let text = match self.leaves.get(&id) {
                Some(l) => format!("v{} : {}", l.vertex, l.label),
                None => format!("{:?}", n.tuple),
            };
            let _ = writeln!(out, "  n{id} [label=\"{text}\"];");
        }
        for (id, n) in self.nodes.iter().enumerate() {
            if let Some(p) = n.parent {
                let _ = writeln!(out, "  n{p} -> n{id};");
            }
        }
        for (&(a, b), rel) in &self.info_arcs {
            if a != b {
                let text: Vec<String> = rel.iter().map(|(x, y)| format!("({x},{y})")).collect();
                let _ = writeln!(
                    out,
                    "  n{a} -> n{b} [style=dashed, label=\"{}\"];",
                    text.join(" ")
                );
            }
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BushJson {
    depth: usize,
    nodes: Vec<NodeJson>,
    leaves: Vec<LeafJson>,
    info_arcs: Vec<ArcJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeJson {
    id: usize,
    tuple: Vec<usize>,
    depth: usize,
    parent: Option<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LeafJson {
    id: usize,
    vertex: usize,
    label: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ArcJson {
    from: usize,
    to: usize,
    label: Vec<[usize; 2]>,
}

/// The digraph represented by `b`: an arc `(u, v)` between distinct leaves
/// whenever their label pair lies in the label of the lowest info arc above
/// them.
pub fn decode_bush(b: &Bush) -> Result<DirectedGraph> {
    b.validate()?;
    let leaves: Vec<(usize, Leaf)> = b.leaves.iter().map(|(&id, &l)| (id, l)).collect();
    let chains: Vec<Vec<usize>> = leaves.iter().map(|&(id, _)| b.ancestors(id)).collect();
    let rows = par::map_range(leaves.len(), |i| {
        let (_, lu) = leaves[i];
        (0..leaves.len())
            .filter(|&j| j != i)
            .filter(|&j| {
                let arc = b.lowest_arc(&chains[i], &chains[j]);
                b.info_arcs[&arc].contains(&(lu.label, leaves[j].1.label))
            })
            .map(|j| (lu.vertex, leaves[j].1.vertex))
            .collect::<Vec<_>>()
    });
    let mut d = DirectedGraph::new(b.universe());
    for (u, v) in rows.into_iter().flatten() {
        d.add_arc(u, v);
    }
    Ok(d)
}

/// Keeps the leaves representing vertices in `w` together with their
/// ancestors and the info arcs among kept nodes. Node ids are compacted
/// preserving their relative order; labels are unchanged.
pub fn restrict_bush(b: &Bush, w: &BTreeSet<usize>) -> Result<Bush> {
    let by_vertex = b.leaf_of_vertex();
    let mut keep = vec![false; b.nodes.len()];
    keep[0] = true;
    for v in w {
        let &leaf = by_vertex
            .get(v)
            .ok_or_else(|| Error::Structure(format!("vertex {v} is not a leaf")))?;
        for x in b.ancestors(leaf) {
            keep[x] = true;
        }
    }
    let mut index = vec![usize::MAX; b.nodes.len()];
    let mut nodes = Vec::new();
    for (id, node) in b.nodes.iter().enumerate() {
        if keep[id] {
            index[id] = nodes.len();
            nodes.push(BushNode {
                tuple: node.tuple.clone(),
                depth: node.depth,
                parent: node.parent.map(|p| index[p]),
            });
        }
    }
    let leaves = b
        .leaves
        .iter()
        .filter(|(&id, _)| keep[id])
        .map(|(&id, &l)| (index[id], l))
        .collect();
    let info_arcs = b
        .info_arcs
        .iter()
        .filter(|(&(x, y), _)| keep[x] && keep[y])
        .map(|(&(x, y), rel)| ((index[x], index[y]), rel.clone()))
        .collect();
    Ok(Bush {
        depth: b.depth,
        nodes,
        leaves,
        info_arcs,
    })
}

/// Undirected graph on the nodes of `b` with tree edges and info arcs.
pub fn bush_gaifman(b: &Bush) -> ColoredGraph {
    b.gaifman()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Depth-1 bush with two leaves sharing label 0; `cross` adds an empty
    /// info arc between the leaves.
    fn two_leaves(root_label: &[(usize, usize)], cross: bool) -> Bush {
        let nodes = vec![
            BushNode {
                tuple: vec![],
                depth: 0,
                parent: None,
            },
            BushNode {
                tuple: vec![0],
                depth: 1,
                parent: Some(0),
            },
            BushNode {
                tuple: vec![1],
                depth: 1,
                parent: Some(0),
            },
        ];
        let leaves = [
            (
                1,
                Leaf {
                    vertex: 0,
                    label: 0,
                },
            ),
            (
                2,
                Leaf {
                    vertex: 1,
                    label: 0,
                },
            ),
        ]
        .into();
        let mut info_arcs: BTreeMap<_, _> = [
            ((0, 0), root_label.iter().copied().collect()),
            ((1, 1), BTreeSet::new()),
            ((2, 2), BTreeSet::new()),
        ]
        .into();
        if cross {
            info_arcs.insert((1, 2), BTreeSet::new());
            info_arcs.insert((2, 1), BTreeSet::new());
        }
        Bush {
            depth: 1,
            nodes,
            leaves,
            info_arcs,
        }
    }

    #[test]
    fn decode_examples() {
        assert!(decode_bush(&two_leaves(&[], false))
            .unwrap()
            .arcs
            .is_empty());
        let k2 = decode_bush(&two_leaves(&[(0, 0)], false)).unwrap();
        assert_eq!(k2, ColoredGraph::path(2).to_digraph());
        // a cross arc labeled empty overrides the root
        assert!(decode_bush(&two_leaves(&[(0, 0)], true))
            .unwrap()
            .arcs
            .is_empty());
    }

    #[test]
    fn gaifman_examples() {
        let tri = two_leaves(&[], true).gaifman();
        assert_eq!(tri.edge_count(), 3);
        let tree = two_leaves(&[], false).gaifman();
        assert_eq!(tree.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 2)]);
    }

    #[test]
    fn validation_catches_asymmetry() {
        let mut b = two_leaves(&[], true);
        b.info_arcs.remove(&(2, 1));
        assert!(matches!(b.validate(), Err(Error::Structure(_))));
        let mut b = two_leaves(&[], false);
        b.info_arcs.remove(&(1, 1));
        assert!(b.validate().is_err());
    }

    #[test]
    fn json_round_trip_and_restriction() {
        let b = two_leaves(&[(0, 0)], false);
        let back = Bush::from_json(&b.to_json()).unwrap();
        assert_eq!(back, b);
        let one = restrict_bush(&b, &[1].into()).unwrap();
        assert_eq!(one.nodes.len(), 2);
        assert!(decode_bush(&one).unwrap().arcs.is_empty());
        assert_eq!(restrict_bush(&b, &[0, 1].into()).unwrap(), b);
        assert!(restrict_bush(&b, &[5].into()).is_err());
        let empty = restrict_bush(&b, &BTreeSet::new()).unwrap();
        assert!(decode_bush(&empty).unwrap().arcs.is_empty());
    }
}
