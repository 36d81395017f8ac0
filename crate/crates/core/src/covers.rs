//! Low-treedepth covers from weak-reachability colorings, and low-shrubdepth
//! covers assembled from quasi-bushes.

use std::collections::BTreeSet;

use rand::seq::index::sample;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{
    treedepth_with_cap, ColoredGraph, SubsetTreedepth, TreedepthForest, DEFAULT_TREEDEPTH_CAP,
};
use crate::par;
use crate::quasibush::{decode_quasibush, restrict_quasibush, QuasiBush};
use crate::wcol::{heuristic_order, wreach_all, Strategy, VertexOrder};

/// Largest number of color subsets enumerated for one cover.
pub const DEFAULT_CLASS_CAP: usize = 4096;

/// Up to this many vertices, cover checks enumerate every subset.
pub const EXHAUSTIVE_COVER_LIMIT: usize = 20;

/// Greedy coloring along `ord` in which every vertex avoids the colors of
/// the vertices it weakly `r`-reaches.
pub fn wreach_greedy_coloring(g: &ColoredGraph, ord: &VertexOrder, r: usize) -> Vec<usize> {
    let wr = wreach_all(g, ord, r);
    let mut color = vec![usize::MAX; g.n()];
    for &u in ord.as_slice() {
        let used: BTreeSet<usize> = wr[u]
            .iter()
            .filter(|&&w| w != u)
            .map(|&w| color[w])
            .collect();
        color[u] = (0..)
            .find(|c| !used.contains(c))
            .expect("some color is free");
    }
    color
}

/// First `(u, w)` with `w` weakly `r`-reachable from `u`, `w != u`, sharing
/// a color.
pub fn check_wreach_coloring(
    g: &ColoredGraph,
    ord: &VertexOrder,
    r: usize,
    color: &[usize],
) -> Option<(usize, usize)> {
    let wr = wreach_all(g, ord, r);
    (0..g.n()).find_map(|u| {
        wr[u]
            .iter()
            .find(|&&w| w != u && color[w] == color[u])
            .map(|&w| (u, w))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertKind {
    /// `value` is the exact treedepth; `forest` attains it.
    Treedepth,
    /// `value` is the depth of a valid elimination forest, an upper bound.
    TreedepthBound,
    /// No forest could be produced within the caps.
    Uncertified,
    /// `value` is the treedepth (or bound) of the Gaifman graph of the
    /// quasi-bush restricted to the class.
    RestrictedQuasibush,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    #[serde(rename = "type")]
    pub kind: CertKind,
    pub value: usize,
    /// Parent of each class member, indexed by position in `vertices`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forest: Option<Vec<Option<usize>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverClass {
    pub vertices: Vec<usize>,
    pub certificate: Certificate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverFamily {
    pub p: usize,
    pub classes: Vec<CoverClass>,
}

impl CoverFamily {
    pub fn max_class(&self) -> usize {
        self.classes
            .iter()
            .map(|c| c.vertices.len())
            .max()
            .unwrap_or(0)
    }

    pub fn to_json(&self, report: Option<&CoverReport>) -> serde_json::Value {
        serde_json::json!({
            "p": self.p,
            "classes": self.classes,
            "stats": {
                "classes": self.classes.len(),
                "max_class": self.max_class(),
                "report": report,
            },
        })
    }
}

/// Treedepth certificate of `g[vertices]`: exact when every component fits
/// under `cap`, otherwise the depth of a validated DFS forest.
fn certify(g: &ColoredGraph, vertices: &[usize], cap: usize) -> Certificate {
    certify_with(&mut SubsetTreedepth::new(g), g, vertices, cap)
}

/// `vertices` must be sorted. `shared` memoizes across calls on the same `g`.
fn certify_with(
    shared: &mut Option<SubsetTreedepth>,
    g: &ColoredGraph,
    vertices: &[usize],
    cap: usize,
) -> Certificate {
    let exact = match shared {
        Some(s) => s.treedepth(vertices, cap),
        None => treedepth_with_cap(&g.induced(vertices).0, cap),
    };
    match exact {
        Ok((td, f)) => Certificate {
            kind: CertKind::Treedepth,
            value: td,
            forest: Some(f.parent),
        },
        Err(_) => {
            let (sub, _) = g.induced(vertices);
            let f = TreedepthForest::dfs(&sub);
            match f.validate(&sub) {
                Ok(()) => Certificate {
                    kind: CertKind::TreedepthBound,
                    value: f.depth,
                    forest: Some(f.parent),
                },
                Err(_) => Certificate {
                    kind: CertKind::Uncertified,
                    value: sub.n(),
                    forest: None,
                },
            }
        }
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| {
        acc.saturating_mul((n - i) as u128) / (i as u128 + 1)
    })
}

/// Calls `f` on every `k`-subset of `0..n` in lexicographic order.
fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Radius of the coloring behind a `p`-cover: `2^p`, capped at `n`.
pub fn cover_radius(p: usize, n: usize) -> usize {
    if p >= usize::BITS as usize - 1 {
        n.max(1)
    } else {
        (1usize << p).min(n.max(1))
    }
}

/// The `p`-cover whose classes are the unions of `p` color classes of a
/// weak `2^p`-coloring (a single class when there are at most `p`
/// colors), each certified by its treedepth.
pub fn low_treedepth_cover(g: &ColoredGraph, ord: &VertexOrder, p: usize) -> Result<CoverFamily> {
    low_treedepth_cover_with_caps(g, ord, p, DEFAULT_CLASS_CAP, DEFAULT_TREEDEPTH_CAP)
}

pub fn low_treedepth_cover_with_caps(
    g: &ColoredGraph,
    ord: &VertexOrder,
    p: usize,
    class_cap: usize,
    td_cap: usize,
) -> Result<CoverFamily> {
    if p == 0 {
        return Err(Error::Structure(
            "cover parameter p must be at least 1".into(),
        ));
    }
    ord.check_size(g)?;
    let color = wreach_greedy_coloring(g, ord, cover_radius(p, g.n()));
    let k = color.iter().map(|&c| c + 1).max().unwrap_or(0);
    let count = binomial(k, p.min(k));
    if count > class_cap as u128 {
        return Err(Error::TooLarge {
            what: "cover class enumeration",
            size: count.min(usize::MAX as u128) as usize,
            cap: class_cap,
        });
    }
    let mut sets = Vec::new();
    for_each_subset(k, p.min(k), |s| sets.push(s.to_vec()));
    Ok(classes_from_color_sets(g, &color, &sets, p, td_cap))
}

fn classes_from_color_sets(
    g: &ColoredGraph,
    color: &[usize],
    sets: &[Vec<usize>],
    p: usize,
    td_cap: usize,
) -> CoverFamily {
    let classes = par::map_slice_init(
        sets,
        || SubsetTreedepth::new(g),
        |shared, s| {
            let vertices: Vec<usize> = (0..g.n()).filter(|&v| s.contains(&color[v])).collect();
            let certificate = certify_with(shared, g, &vertices, td_cap);
            CoverClass {
                vertices,
                certificate,
            }
        },
    );
    CoverFamily { p, classes }
}

/// Calls `f` on the subsets of `0..n` that a `p`-cover check must see:
/// all of size `min(p, n)` when `n` is at most the exhaustive limit,
/// otherwise `samples` seeded random ones. Returns whether it was
/// exhaustive.
fn for_each_demand(
    n: usize,
    p: usize,
    samples: usize,
    seed: u64,
    mut f: impl FnMut(&[usize]),
) -> bool {
    let k = p.min(n);
    if n <= EXHAUSTIVE_COVER_LIMIT || binomial(n, k) <= samples as u128 {
        for_each_subset(n, k, f);
        return true;
    }
    let mut rng = crate::gen::rng(seed);
    for _ in 0..samples {
        let mut s = sample(&mut rng, n, k).into_vec();
        s.sort_unstable();
        f(&s);
    }
    false
}

/// Per-class evidence of a shrubdepth cover.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShrubClassReport {
    /// Node set `C` of the quasi-bush cover class and its certificate.
    pub nodes: usize,
    pub node_certificate: Certificate,
    /// `|A'|`, the union of ancestor sets of the kept leaves.
    pub closure: usize,
    /// Forest indexed by node id of the restricted quasi-bush.
    pub restricted_treedepth: Certificate,
    pub treedepth_ok: bool,
    pub decode_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShrubReport {
    /// Parameter of the node cover, `(depth + 1) * p`.
    pub node_p: usize,
    pub node_classes: usize,
    /// Whether the node cover enumerated all color subsets (otherwise only
    /// the color sets of ancestor closures of vertex subsets were used).
    pub full_enumeration: bool,
    pub classes: Vec<ShrubClassReport>,
}

impl ShrubReport {
    pub fn holds(&self) -> bool {
        self.classes.iter().all(|c| c.treedepth_ok && c.decode_ok)
    }
}

/// Builds a `p`-cover of the graph represented by `b` from a
/// `((depth + 1) p)`-cover `E` of the nodes of its Gaifman graph: class
/// `C` yields the leaves whose whole ancestor chain lies in `C`.
///
/// Each class is certified by the treedepth of the restricted quasi-bush
/// (against the certificate of `C`) and by decoding the restricted
/// quasi-bush back to the induced subgraph.
pub fn shrubdepth_cover(
    g: &ColoredGraph,
    b: &QuasiBush,
    p: usize,
) -> Result<(CoverFamily, ShrubReport)> {
    shrubdepth_cover_with_caps(g, b, p, DEFAULT_CLASS_CAP, DEFAULT_TREEDEPTH_CAP)
}

pub fn shrubdepth_cover_with_caps(
    g: &ColoredGraph,
    b: &QuasiBush,
    p: usize,
    class_cap: usize,
    td_cap: usize,
) -> Result<(CoverFamily, ShrubReport)> {
    if p == 0 {
        return Err(Error::Structure(
            "cover parameter p must be at least 1".into(),
        ));
    }
    let decoded = decode_quasibush(b)?;
    let expected = g.to_digraph();
    if let Some(&(u, v)) = decoded.arcs.symmetric_difference(&expected.arcs).next() {
        return Err(Error::DecodeMismatch(u, v));
    }
    let by_vertex = b.leaf_of_vertex();
    if by_vertex.len() != g.n() || by_vertex.keys().any(|&v| v >= g.n()) {
        return Err(Error::Structure(
            "quasi-bush leaves do not match the graph".into(),
        ));
    }
    let anc: Vec<Vec<usize>> = (0..g.n()).map(|v| b.ancestors(by_vertex[&v])).collect();
    let h = b.gaifman();
    let ord = heuristic_order(&h, Strategy::Degeneracy);
    let node_p = (b.depth() + 1) * p;
    let color = wreach_greedy_coloring(&h, &ord, cover_radius(node_p, h.n()));
    let k = color.iter().map(|&c| c + 1).max().unwrap_or(0);

    let full = binomial(k, node_p.min(k)) <= class_cap as u128;
    let sets: Vec<Vec<usize>> = if full {
        let mut sets = Vec::new();
        for_each_subset(k, node_p.min(k), |s| sets.push(s.to_vec()));
        sets
    } else {
        // only the color sets that some vertex subset actually needs
        let mut needed: BTreeSet<Vec<usize>> = BTreeSet::new();
        let exhaustive = for_each_demand(g.n(), p, 20_000, 0, |xs| {
            let cs: BTreeSet<usize> = xs
                .iter()
                .flat_map(|&v| anc[v].iter().map(|&x| color[x]))
                .collect();
            needed.insert(cs.into_iter().collect());
        });
        if !exhaustive {
            return Err(Error::TooLarge {
                what: "shrubdepth cover demand sets",
                size: g.n(),
                cap: EXHAUSTIVE_COVER_LIMIT,
            });
        }
        let all: Vec<Vec<usize>> = needed.into_iter().collect();
        all.iter()
            .filter(|s| {
                !all.iter()
                    .any(|t| t.len() > s.len() && s.iter().all(|c| t.contains(c)))
            })
            .cloned()
            .collect()
    };
    let node_cover = classes_from_color_sets(&h, &color, &sets, node_p, td_cap);

    let per_class = par::map_slice(&node_cover.classes, |c| {
        let in_c: BTreeSet<usize> = c.vertices.iter().copied().collect();
        let kept: BTreeSet<usize> = (0..g.n())
            .filter(|&v| anc[v].iter().all(|x| in_c.contains(x)))
            .collect();
        if kept.is_empty() {
            return Ok(None);
        }
        let rb = restrict_quasibush(b, &kept)?;
        let rcert = certify(
            &rb.gaifman(),
            &(0..rb.nodes.len()).collect::<Vec<_>>(),
            td_cap,
        );
        let certified =
            c.certificate.kind != CertKind::Uncertified && rcert.kind != CertKind::Uncertified;
        let treedepth_ok = certified && rcert.value <= c.certificate.value;
        let dec = decode_quasibush(&rb)?;
        let want = expected.restricted_to(&kept);
        let decode_ok = dec.arcs == want.arcs;
        let class = CoverClass {
            vertices: kept.iter().copied().collect(),
            certificate: Certificate {
                kind: CertKind::RestrictedQuasibush,
                value: rcert.value,
                forest: None,
            },
        };
        let report = ShrubClassReport {
            nodes: c.vertices.len(),
            node_certificate: Certificate {
                forest: None,
                ..c.certificate.clone()
            },
            closure: rb.nodes.len(),
            restricted_treedepth: rcert,
            treedepth_ok,
            decode_ok,
        };
        Ok(Some((class, report)))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    // node classes that keep the same leaves give the same restricted quasi-bush
    let mut seen = BTreeSet::new();
    let mut classes = Vec::new();
    let mut reports = Vec::new();
    for (class, report) in per_class.into_iter().flatten() {
        if !seen.insert(class.vertices.clone()) {
            continue;
        }
        classes.push(class);
        reports.push(report);
    }
    let report = ShrubReport {
        node_p,
        node_classes: node_cover.classes.len(),
        full_enumeration: full,
        classes: reports,
    };
    Ok((CoverFamily { p, classes }, report))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverReport {
    pub classes: usize,
    pub max_class: usize,
    pub exhaustive: bool,
    pub checked_sets: usize,
    /// First uncovered vertex set, if any.
    pub uncovered: Option<Vec<usize>>,
    /// Classes whose treedepth certificate does not check out.
    pub bad_certificates: Vec<usize>,
}

impl CoverReport {
    pub fn holds(&self) -> bool {
        self.uncovered.is_none() && self.bad_certificates.is_empty()
    }
}

/// Checks the `p`-cover property (every subset on at most 20 vertices,
/// otherwise 2000 seeded samples) and re-validates treedepth certificates:
/// the stored forest must be valid with the stated depth, and exact values
/// must match the solver.
pub fn verify_cover(g: &ColoredGraph, f: &CoverFamily, p: usize) -> CoverReport {
    verify_cover_seeded(g, f, p, 0)
}

pub fn verify_cover_seeded(g: &ColoredGraph, f: &CoverFamily, p: usize, seed: u64) -> CoverReport {
    let sets: Vec<BTreeSet<usize>> = f
        .classes
        .iter()
        .map(|c| c.vertices.iter().copied().collect())
        .collect();
    let mut checked = 0;
    let mut uncovered = None;
    let exhaustive = for_each_demand(g.n(), p, 2000, seed, |xs| {
        checked += 1;
        if uncovered.is_none() && !sets.iter().any(|s| xs.iter().all(|x| s.contains(x))) {
            uncovered = Some(xs.to_vec());
        }
    });
    let bad = par::map_range(f.classes.len(), |i| {
        let c = &f.classes[i];
        if c.vertices.iter().any(|&v| v >= g.n()) {
            return true;
        }
        let (sub, _) = g.induced(&c.vertices);
        match c.certificate.kind {
            CertKind::Treedepth | CertKind::TreedepthBound => {
                let Some(parent) = &c.certificate.forest else {
                    return true;
                };
                let ok = TreedepthForest::from_parents(parent.clone())
                    .and_then(|t| t.validate(&sub).map(|()| t.depth))
                    .is_ok_and(|d| d == c.certificate.value);
                let exact_ok = c.certificate.kind != CertKind::Treedepth
                    || treedepth_with_cap(&sub, DEFAULT_TREEDEPTH_CAP)
                        .is_ok_and(|(td, _)| td == c.certificate.value);
                !(ok && exact_ok)
            }
            CertKind::Uncertified | CertKind::RestrictedQuasibush => false,
        }
    });
    CoverReport {
        classes: f.classes.len(),
        max_class: f.max_class(),
        exhaustive,
        checked_sets: checked,
        uncovered,
        bad_certificates: bad
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| i)
            .collect(),
    }
}

/// Vertex sets of the classes, for callers that only need the family.
pub fn class_sets(f: &CoverFamily) -> Vec<BTreeSet<usize>> {
    f.classes
        .iter()
        .map(|c| c.vertices.iter().copied().collect())
        .collect()
}
