//! Quasi-bushes: rooted trees whose leaves are vertices, with labeled
//! pointers from leaves to internal nodes. The arc `(u, v)` of the
//! represented digraph is read off the pointer from `v` to the lowest
//! ancestor of `u` it points to.

mod separator;
mod splitter;
mod stats;

pub use separator::{
    build_separator_quasibush, check_separator_contract, label_quasibush, SeparatorQuasiBush,
};
pub use splitter::{
    canonical_path, check_splitter_properties, splitter_all, splitter_sets, SplitterReport,
    SplitterTrace,
};
pub use stats::{check_rep_adjacency, quasibush_stats, rep_order, QbStats};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::bush::{Label, Leaf};
use crate::error::{Error, Result};
use crate::graph::{ColoredGraph, DirectedGraph};
use crate::par;

/// A tree node. Leaves carry an empty tuple; internal nodes carry the
/// chosen-vertex tuple they stand for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QbNode {
    pub tuple: Vec<usize>,
    pub depth: usize,
    pub parent: Option<usize>,
}

/// Node 0 is the root. `pointers` maps `(leaf node, internal node)` to the
/// set of leaf labels it accepts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasiBush {
    pub nodes: Vec<QbNode>,
    pub leaves: BTreeMap<usize, Leaf>,
    pub pointers: BTreeMap<(usize, usize), BTreeSet<Label>>,
}

pub(crate) fn ancestors(nodes: &[QbNode], mut x: usize) -> Vec<usize> {
    let mut chain = vec![x];
    while let Some(p) = nodes[x].parent {
        chain.push(p);
        x = p;
    }
    chain.reverse();
    chain
}

/// The deepest node of `chain` (root first) that `has_pointer` accepts.
pub(crate) fn lowest_pointed(
    chain: &[usize],
    has_pointer: impl Fn(usize) -> bool,
) -> Option<usize> {
    chain.iter().rev().copied().find(|&w| has_pointer(w))
}

/// Undirected graph on node ids with tree edges and pointers.
pub(crate) fn gaifman_of(
    nodes: &[QbNode],
    pointers: impl Iterator<Item = (usize, usize)>,
) -> ColoredGraph {
    let mut g = ColoredGraph::new(nodes.len());
    for (id, node) in nodes.iter().enumerate() {
        if let Some(p) = node.parent {
            let _ = g.add_edge(p, id);
        }
    }
    for (a, b) in pointers {
        if a != b && !g.has_edge(a, b) {
            g.add_edge(a, b).expect("pointer endpoints are nodes");
        }
    }
    g
}

/// Structural checks shared by labeled and separator quasi-bushes.
pub(crate) fn validate_shape(
    nodes: &[QbNode],
    leaf_vertices: &BTreeMap<usize, usize>,
    pointers: &mut dyn Iterator<Item = (usize, usize)>,
) -> Result<()> {
    let bad = |msg: String| Err(Error::Structure(msg));
    let Some(root) = nodes.first() else {
        return bad("quasi-bush has no root".into());
    };
    if root.depth != 0 || root.parent.is_some() {
        return bad("node 0 must be a root at depth 0".into());
    }
    let mut has_child = vec![false; nodes.len()];
    for (id, node) in nodes.iter().enumerate().skip(1) {
        let Some(p) = node.parent else {
            return bad(format!("node {id} has no parent"));
        };
        if p >= nodes.len() || nodes[p].depth + 1 != node.depth {
            return bad(format!("node {id} has an invalid parent"));
        }
        has_child[p] = true;
    }
    let mut seen = BTreeSet::new();
    for (&id, &vertex) in leaf_vertices {
        if id == 0 || id >= nodes.len() || has_child[id] {
            return bad(format!("leaf {id} is not a childless non-root node"));
        }
        if !seen.insert(vertex) {
            return bad(format!("vertex {vertex} is represented twice"));
        }
    }
    for (id, &child) in has_child.iter().enumerate().skip(1) {
        if !child && !leaf_vertices.contains_key(&id) {
            return bad(format!("childless node {id} is not a leaf"));
        }
    }
    let mut rooted = BTreeSet::new();
    for (leaf, node) in pointers {
        if !leaf_vertices.contains_key(&leaf)
            || node >= nodes.len()
            || leaf_vertices.contains_key(&node)
        {
            return bad(format!(
                "pointer ({leaf}, {node}) must go from a leaf to an internal node"
            ));
        }
        if node == 0 {
            rooted.insert(leaf);
        }
    }
    if let Some(&leaf) = leaf_vertices.keys().find(|l| !rooted.contains(l)) {
        return bad(format!("leaf {leaf} does not point to the root"));
    }
    Ok(())
}

impl QuasiBush {
    pub fn validate(&self) -> Result<()> {
        let vertices: BTreeMap<usize, usize> =
            self.leaves.iter().map(|(&id, l)| (id, l.vertex)).collect();
        validate_shape(&self.nodes, &vertices, &mut self.pointers.keys().copied())
    }

    /// Maximum number of tree edges from the root to a leaf.
    pub fn depth(&self) -> usize {
        self.leaves
            .keys()
            .map(|&id| self.nodes[id].depth)
            .max()
            .unwrap_or(0)
    }

    pub fn ancestors(&self, x: usize) -> Vec<usize> {
        ancestors(&self.nodes, x)
    }

    pub fn leaf_of_vertex(&self) -> BTreeMap<usize, usize> {
        self.leaves.iter().map(|(&id, l)| (l.vertex, id)).collect()
    }

    pub fn label_count(&self) -> usize {
        self.leaves
            .values()
            .map(|l| l.label)
            .collect::<BTreeSet<_>>()
            .len()
    }

    pub fn universe(&self) -> usize {
        self.leaves
            .values()
            .map(|l| l.vertex + 1)
            .max()
            .unwrap_or(0)
    }

    pub fn gaifman(&self) -> ColoredGraph {
        gaifman_of(&self.nodes, self.pointers.keys().copied())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let json = QbJson {
            nodes: nodes_json(&self.nodes, |_| None),
            leaves: self
                .leaves
                .iter()
                .map(|(&id, l)| LeafJson {
                    id,
                    vertex: l.vertex,
                    label: Some(l.label),
                })
                .collect(),
            pointers: self
                .pointers
                .iter()
                .map(|(&(leaf, node), set)| PointerJson {
                    leaf,
                    node,
                    label: Some(set.iter().copied().collect()),
                })
                .collect(),
        };
        serde_json::to_value(json).expect("quasi-bush serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let raw: QbJson = serde_json::from_value(value.clone())?;
        let nodes = nodes_from_json(&raw.nodes)?;
        let mut leaves = BTreeMap::new();
        for l in raw.leaves {
            let label = l
                .label
                .ok_or_else(|| Error::Structure(format!("leaf {} has no label", l.id)))?;
            leaves.insert(
                l.id,
                Leaf {
                    vertex: l.vertex,
                    label,
                },
            );
        }
        let mut pointers = BTreeMap::new();
        for p in raw.pointers {
            let label = p.label.ok_or_else(|| {
                Error::Structure(format!("pointer ({}, {}) has no label", p.leaf, p.node))
            })?;
            pointers.insert((p.leaf, p.node), label.into_iter().collect());
        }
        let b = QuasiBush {
            nodes,
            leaves,
            pointers,
        };
        b.validate()?;
        Ok(b)
    }

    /// Graphviz rendering: tree edges solid, pointers dashed with labels.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph quasibush {\n  node [shape=box];\n");
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
        for (&(leaf, node), set) in &self.pointers {
            let text: Vec<String> = set.iter().map(|x| x.to_string()).collect();
            let _ = writeln!(
                out,
                "  n{leaf} -> n{node} [style=dashed, label=\"{}\"];",
                text.join(" ")
            );
        }
        out.push_str("}\n");
        out
    }
}

pub(crate) fn nodes_json(
    nodes: &[QbNode],
    alpha: impl Fn(usize) -> Option<Vec<usize>>,
) -> Vec<NodeJson> {
    nodes
        .iter()
        .enumerate()
        .map(|(id, n)| NodeJson {
            id,
            tuple: n.tuple.clone(),
            parent: n.parent,
            alpha: alpha(id),
        })
        .collect()
}

/// Rebuilds nodes from JSON, recomputing depths from parents.
pub(crate) fn nodes_from_json(raw: &[NodeJson]) -> Result<Vec<QbNode>> {
    let mut slots: Vec<Option<(Vec<usize>, Option<usize>)>> = vec![None; raw.len()];
    for n in raw {
        let slot = slots
            .get_mut(n.id)
            .ok_or_else(|| Error::Structure(format!("node id {} out of range", n.id)))?;
        if slot.is_some() {
            return Err(Error::Structure(format!("duplicate node id {}", n.id)));
        }
        *slot = Some((n.tuple.clone(), n.parent));
    }
    let slots: Vec<(Vec<usize>, Option<usize>)> = slots
        .into_iter()
        .map(|s| s.expect("ids are a permutation"))
        .collect();
    let mut depth: Vec<Option<usize>> = vec![None; slots.len()];
    for start in 0..slots.len() {
        let mut chain = Vec::new();
        let mut x = start;
        let base = loop {
            if let Some(d) = depth[x] {
                break d;
            }
            if chain.len() > slots.len() {
                return Err(Error::Structure("parent pointers contain a cycle".into()));
            }
            chain.push(x);
            match slots[x].1 {
                None => break usize::MAX,
                Some(p) if p < slots.len() => x = p,
                Some(p) => return Err(Error::Structure(format!("parent {p} out of range"))),
            }
        };
        // usize::MAX marks "the last chain entry is a root"
        let mut d = base;
        for &y in chain.iter().rev() {
            d = if d == usize::MAX { 0 } else { d + 1 };
            depth[y] = Some(d);
        }
    }
    Ok(slots
        .into_iter()
        .zip(depth)
        .map(|((tuple, parent), d)| QbNode {
            tuple,
            depth: d.expect("all depths assigned"),
            parent,
        })
        .collect())
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct QbJson {
    pub nodes: Vec<NodeJson>,
    pub leaves: Vec<LeafJson>,
    pub pointers: Vec<PointerJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct NodeJson {
    pub id: usize,
    pub tuple: Vec<usize>,
    pub parent: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct LeafJson {
    pub id: usize,
    pub vertex: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct PointerJson {
    pub leaf: usize,
    pub node: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<Vec<usize>>,
}

/// The digraph represented by `b`: for distinct leaves `u, v`, let `w` be
/// the lowest ancestor of `u` pointed to by `v`; `(u, v)` is an arc iff the
/// label of `u` is in the label of the pointer `(v, w)`.
pub fn decode_quasibush(b: &QuasiBush) -> Result<DirectedGraph> {
    b.validate()?;
    let leaves: Vec<(usize, Leaf)> = b.leaves.iter().map(|(&id, &l)| (id, l)).collect();
    let chains: Vec<Vec<usize>> = leaves.iter().map(|&(id, _)| b.ancestors(id)).collect();
    let rows = par::map_range(leaves.len(), |i| {
        let (_, lu) = leaves[i];
        (0..leaves.len())
            .filter(|&j| j != i)
            .filter(|&j| {
                let vid = leaves[j].0;
                let w = lowest_pointed(&chains[i], |w| b.pointers.contains_key(&(vid, w)))
                    .expect("root pointer");
                b.pointers[&(vid, w)].contains(&lu.label)
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

/// Keeps the leaves of the vertices in `a`, their ancestors and the root,
/// and the pointers among kept nodes. Ids are compacted in order.
pub fn restrict_quasibush(b: &QuasiBush, a: &BTreeSet<usize>) -> Result<QuasiBush> {
    let by_vertex = b.leaf_of_vertex();
    let mut keep = vec![false; b.nodes.len()];
    keep[0] = true;
    for v in a {
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
            nodes.push(QbNode {
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
    let pointers = b
        .pointers
        .iter()
        .filter(|(&(x, y), _)| keep[x] && keep[y])
        .map(|(&(x, y), set)| ((index[x], index[y]), set.clone()))
        .collect();
    Ok(QuasiBush {
        nodes,
        leaves,
        pointers,
    })
}

/// Single-label form: one copy of the tree spanned by each label's leaves
/// under a fresh root. A pointer `(v, w)` becomes a pointer from `v` to each
/// copy of `w`, accepting the single label iff the copy's label was
/// accepted. The decoded digraph is unchanged and the depth grows by one.
///
/// Experimental: the analogue of the bush reduction, applied to pointers.
pub fn one_label_quasibush(b: &QuasiBush) -> Result<QuasiBush> {
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
        let key = |id: usize, l: Label| {
            (
                b.nodes[id].depth,
                l,
                b.leaves.contains_key(&id),
                b.nodes[id].tuple.clone(),
                id,
            )
        };
        key(x, a).cmp(&key(y, c))
    });
    let index: BTreeMap<(usize, Label), usize> = copies
        .iter()
        .enumerate()
        .map(|(i, &c)| (c, i + 1))
        .collect();

    let mut nodes = vec![QbNode {
        tuple: Vec::new(),
        depth: 0,
        parent: None,
    }];
    for &(x, a) in &copies {
        let node = &b.nodes[x];
        let tuple = if b.leaves.contains_key(&x) {
            Vec::new()
        } else {
            std::iter::once(a)
                .chain(node.tuple.iter().copied())
                .collect()
        };
        let parent = node.parent.map_or(0, |p| index[&(p, a)]);
        nodes.push(QbNode {
            tuple,
            depth: node.depth + 1,
            parent: Some(parent),
        });
    }
    let leaves: BTreeMap<usize, Leaf> = b
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

    let mut copies_of: BTreeMap<usize, Vec<(Label, usize)>> = BTreeMap::new();
    for (&(x, a), &i) in &index {
        copies_of.entry(x).or_default().push((a, i));
    }
    let mut pointers = BTreeMap::new();
    for (&(leaf, w), set) in &b.pointers {
        let new_leaf = index[&(leaf, b.leaves[&leaf].label)];
        pointers.insert((new_leaf, 0), BTreeSet::new());
        for &(a, i) in copies_of.get(&w).map(Vec::as_slice).unwrap_or(&[]) {
            let accepts = if set.contains(&a) {
                BTreeSet::from([0])
            } else {
                BTreeSet::new()
            };
            pointers.insert((new_leaf, i), accepts);
        }
    }
    let out = QuasiBush {
        nodes,
        leaves,
        pointers,
    };
    out.validate()?;
    Ok(out)
}
