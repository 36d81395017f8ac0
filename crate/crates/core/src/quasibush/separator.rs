//! The separator quasi-bush of an ordered graph and its labeling by types.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::splitter::{splitter_all, SplitterTrace};
use super::{
    ancestors, gaifman_of, lowest_pointed, nodes_from_json, nodes_json, validate_shape, QbJson,
    QbNode,
};
use super::{LeafJson, PointerJson, QuasiBush};
use crate::bush::{Label, Leaf};
use crate::error::{Error, Result};
use crate::graph::{bfs_distances, is_r_separated, ColoredGraph, DirectedGraph};
use crate::logic::{pair_evaluator, qtype, Formula, TypeId};
use crate::par;
use crate::wcol::VertexOrder;

/// Internal nodes are the distinct prefixes `M^k[v]` (`k >= 1`) plus the
/// root; the leaf of `v` hangs below `M[v]`. `alpha` maps each internal node
/// to its separator (empty at the root).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparatorQuasiBush {
    pub r: usize,
    pub nodes: Vec<QbNode>,
    /// Leaf node id to vertex.
    pub leaves: BTreeMap<usize, usize>,
    pub pointers: BTreeSet<(usize, usize)>,
    pub alpha: BTreeMap<usize, BTreeSet<usize>>,
    /// Traces by source vertex; empty when loaded from JSON.
    pub traces: Vec<SplitterTrace>,
}

impl SeparatorQuasiBush {
    pub fn validate(&self) -> Result<()> {
        validate_shape(
            &self.nodes,
            &self.leaves,
            &mut self.pointers.iter().copied(),
        )?;
        for id in 0..self.nodes.len() {
            if !self.leaves.contains_key(&id) && !self.alpha.contains_key(&id) {
                return Err(Error::Structure(format!(
                    "internal node {id} has no separator"
                )));
            }
        }
        Ok(())
    }

    pub fn depth(&self) -> usize {
        self.leaves
            .keys()
            .map(|&id| self.nodes[id].depth)
            .max()
            .unwrap_or(0)
    }

    pub fn leaf_of_vertex(&self) -> BTreeMap<usize, usize> {
        self.leaves.iter().map(|(&id, &v)| (v, id)).collect()
    }

    pub fn gaifman(&self) -> ColoredGraph {
        gaifman_of(&self.nodes, self.pointers.iter().copied())
    }

    pub fn max_alpha(&self) -> usize {
        self.alpha.values().map(BTreeSet::len).max().unwrap_or(0)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let json = QbJson {
            nodes: nodes_json(&self.nodes, |id| {
                self.alpha.get(&id).map(|s| s.iter().copied().collect())
            }),
            leaves: self
                .leaves
                .iter()
                .map(|(&id, &vertex)| LeafJson {
                    id,
                    vertex,
                    label: None,
                })
                .collect(),
            pointers: self
                .pointers
                .iter()
                .map(|&(leaf, node)| PointerJson {
                    leaf,
                    node,
                    label: None,
                })
                .collect(),
        };
        serde_json::to_value(json).expect("quasi-bush serializes")
    }

    /// Parses the JSON form. The radius is not stored and must be supplied.
    pub fn from_json(value: &serde_json::Value, r: usize) -> Result<Self> {
        let raw: QbJson = serde_json::from_value(value.clone())?;
        let nodes = nodes_from_json(&raw.nodes)?;
        let alpha = raw
            .nodes
            .iter()
            .filter_map(|n| {
                n.alpha
                    .as_ref()
                    .map(|a| (n.id, a.iter().copied().collect()))
            })
            .collect();
        let s = SeparatorQuasiBush {
            r,
            nodes,
            leaves: raw.leaves.iter().map(|l| (l.id, l.vertex)).collect(),
            pointers: raw.pointers.iter().map(|p| (p.leaf, p.node)).collect(),
            alpha,
            traces: Vec::new(),
        };
        s.validate()?;
        Ok(s)
    }
}

/// Builds the separator quasi-bush of `(g, ord)` for radius `r >= 1` and
/// checks the separator contract on every ordered pair of leaves.
///
/// Pointers are `(u, root)` for every `u`, and `(u, M^k[v])` whenever
/// `S^{k-1}[v]` does not `r`-separate `u` from `v`.
pub fn build_separator_quasibush(
    g: &ColoredGraph,
    ord: &VertexOrder,
    r: usize,
) -> Result<SeparatorQuasiBush> {
    if r == 0 {
        return Err(Error::Structure(
            "separator quasi-bushes need radius at least 1".into(),
        ));
    }
    let traces = splitter_all(g, ord, r)?;
    let n = g.n();

    let mut alpha_of: BTreeMap<Vec<usize>, BTreeSet<usize>> = BTreeMap::new();
    alpha_of.insert(Vec::new(), BTreeSet::new());
    for t in &traces {
        for k in 1..=t.m.len() {
            let tuple = t.prefix(k).to_vec();
            let sep = t.separator(k);
            match alpha_of.get(&tuple) {
                Some(prev) if prev != sep => return Err(Error::WellDefinedness { tuple }),
                Some(_) => {}
                None => {
                    alpha_of.insert(tuple, sep.clone());
                }
            }
        }
    }
    let mut tuples: Vec<&Vec<usize>> = alpha_of.keys().collect();
    tuples.sort_by_key(|t| (t.len(), (*t).clone()));
    let mut id_of: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut nodes = Vec::with_capacity(tuples.len() + n);
    let mut alpha = BTreeMap::new();
    for t in tuples {
        let parent = (!t.is_empty()).then(|| id_of[&t[..t.len() - 1]]);
        id_of.insert(t.clone(), nodes.len());
        alpha.insert(nodes.len(), alpha_of[t].clone());
        nodes.push(QbNode {
            tuple: t.clone(),
            depth: t.len(),
            parent,
        });
    }
    let mut leaves = BTreeMap::new();
    let mut leaf_id = Vec::with_capacity(n);
    for t in &traces {
        let p = id_of[&t.m];
        leaf_id.push(nodes.len());
        leaves.insert(nodes.len(), t.source);
        nodes.push(QbNode {
            tuple: Vec::new(),
            depth: t.m.len() + 1,
            parent: Some(p),
        });
    }

    let per_source = par::map_slice(&traces, |t| {
        let v = t.source;
        let mut out = Vec::new();
        for k in 1..=t.m.len() {
            let sep = t.separator(k - 1);
            if sep.contains(&v) {
                continue;
            }
            let node = id_of[t.prefix(k)];
            let reach = bfs_distances(g, v, r, |w| !sep.contains(&w));
            out.extend(
                reach
                    .iter()
                    .enumerate()
                    .filter(|(_, d)| d.is_some())
                    .map(|(u, _)| (leaf_id[u], node)),
            );
        }
        out
    });
    let mut pointers: BTreeSet<(usize, usize)> = leaf_id.iter().map(|&l| (l, 0)).collect();
    pointers.extend(per_source.into_iter().flatten());

    let s = SeparatorQuasiBush {
        r,
        nodes,
        leaves,
        pointers,
        alpha,
        traces,
    };
    s.validate()?;
    check_separator_contract(&s, g)?;
    Ok(s)
}

/// For every ordered pair of distinct leaves `(u, v)`, the separator of the
/// lowest ancestor of `v` pointed to by `u` must `r`-separate `u` and `v`.
pub fn check_separator_contract(s: &SeparatorQuasiBush, g: &ColoredGraph) -> Result<()> {
    let leaves: Vec<(usize, usize)> = s.leaves.iter().map(|(&id, &v)| (id, v)).collect();
    let chains: Vec<Vec<usize>> = leaves
        .iter()
        .map(|&(id, _)| ancestors(&s.nodes, id))
        .collect();
    let bad = par::find_first(leaves.len(), |i| {
        let (lu, u) = leaves[i];
        (0..leaves.len()).filter(|&j| j != i).find_map(|j| {
            let v = leaves[j].1;
            let w = lowest_pointed(&chains[j], |w| s.pointers.contains(&(lu, w)))
                .expect("root pointer");
            (!is_r_separated(g, u, v, s.r, &s.alpha[&w])).then_some(Error::SeparatorProperty {
                u,
                v,
                node: w,
                r: s.r,
            })
        })
    });
    bad.map_or(Ok(()), Err)
}

/// Labels the separator quasi-bush for the binary formula `phi`.
///
/// The label of a leaf `v` is the set of pairs (rank-`q` type of `v`
/// followed by the sorted separator of an ancestor, depth of that
/// ancestor). A pointer `(v, w)` accepts the labels of the leaves `u` for
/// which `w` is the lowest ancestor of `u` pointed to by `v` and `phi(u, v)`
/// holds. Two such leaves with one label but different truth values make
/// `(r, q)` inadequate. On success the decoded digraph equals the
/// interpretation.
pub fn label_quasibush(
    s: &SeparatorQuasiBush,
    g: &ColoredGraph,
    phi: &Formula,
    q: usize,
) -> Result<QuasiBush> {
    let ev = pair_evaluator(g, phi)?;
    let n = g.n();
    let by_vertex = s.leaf_of_vertex();
    if by_vertex.len() != n || by_vertex.keys().any(|&v| v >= n) {
        return Err(Error::Structure(
            "quasi-bush leaves do not match the graph".into(),
        ));
    }
    let leaf_id: Vec<usize> = (0..n).map(|v| by_vertex[&v]).collect();
    let chains: Vec<Vec<usize>> = leaf_id.iter().map(|&l| ancestors(&s.nodes, l)).collect();

    let label_sets: Vec<BTreeSet<(TypeId, usize)>> = par::map_range(n, |v| {
        let chain = &chains[v];
        chain[..chain.len() - 1]
            .iter()
            .map(|&w| {
                let mut t = vec![v];
                t.extend(&s.alpha[&w]);
                qtype(g, q, &t).map(|ty| (ty, s.nodes[w].depth))
            })
            .collect::<Result<BTreeSet<_>>>()
    })
    .into_iter()
    .collect::<Result<_>>()?;
    let mut label_of: HashMap<&BTreeSet<(TypeId, usize)>, Label> = HashMap::new();
    let labels: Vec<Label> = label_sets
        .iter()
        .map(|set| {
            let next = label_of.len();
            *label_of.entry(set).or_insert(next)
        })
        .collect();

    // rows[v][u] = (lowest ancestor of u pointed to by v, phi(u, v))
    let rows: Vec<Vec<(usize, bool)>> = par::map_range(n, |v| {
        (0..n)
            .map(|u| {
                let w = lowest_pointed(&chains[u], |w| s.pointers.contains(&(leaf_id[v], w)))
                    .expect("root pointer");
                (w, u != v && ev.eval(&[u, v]))
            })
            .collect()
    });

    let mut pointers: BTreeMap<(usize, usize), BTreeSet<Label>> =
        s.pointers.iter().map(|&p| (p, BTreeSet::new())).collect();
    let mut seen: HashMap<(usize, usize, Label), (bool, usize)> = HashMap::new();
    for v in 0..n {
        for u in (0..n).filter(|&u| u != v) {
            let (w, truth) = rows[v][u];
            match seen.get(&(v, w, labels[u])) {
                Some(&(t, u0)) if t != truth => {
                    return Err(Error::Adequacy {
                        witness: [u0, v, u, v],
                    })
                }
                Some(_) => {}
                None => {
                    seen.insert((v, w, labels[u]), (truth, u));
                }
            }
            if truth {
                pointers
                    .get_mut(&(leaf_id[v], w))
                    .expect("lowest pointers exist")
                    .insert(labels[u]);
            }
        }
    }
    let leaves = s
        .leaves
        .iter()
        .map(|(&id, &v)| {
            (
                id,
                Leaf {
                    vertex: v,
                    label: labels[v],
                },
            )
        })
        .collect();
    let b = QuasiBush {
        nodes: s.nodes.clone(),
        leaves,
        pointers,
    };

    let decoded = super::decode_quasibush(&b)?;
    let mut expected = DirectedGraph::new(n);
    for (v, row) in rows.iter().enumerate() {
        for (u, &(_, truth)) in row.iter().enumerate() {
            if truth {
                expected.add_arc(u, v);
            }
        }
    }
    if let Some(((u, v), _)) = decoded.first_difference(&expected) {
        return Err(Error::Invariant(format!(
            "quasi-bush decodes differently from the formula at ({u}, {v})"
        )));
    }
    Ok(b)
}
