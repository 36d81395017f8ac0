//! Brute-force reference implementations, written without the library's
//! algorithms so the two can be compared.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::Rng;
use shrubkit::gen::{add_random_colors, family_instance};
use shrubkit::logic::parse_formula;
use shrubkit::{ColoredGraph, DirectedGraph, Formula, VertexOrder};

pub const D2: &str = "x!=y & (E(x,y) | exists z. E(x,z) & E(z,y))";
pub const RED_EDGE: &str = "E(x,y) & red(x)";
pub const BLUE_PATH: &str = "exists z. E(x,z) & E(z,y) & blue(z)";

/// Formulas of the exactness suites with a radius and rank that are
/// adequate for them on the generator families.
pub fn suite_formulas() -> Vec<(&'static str, Formula, usize, usize)> {
    [
        ("E(x,y)", 1, 1),
        (D2, 2, 1),
        (RED_EDGE, 1, 1),
        (BLUE_PATH, 2, 1),
    ]
    .into_iter()
    .map(|(s, r, q)| (s, parse_formula(s).unwrap(), r, q))
    .collect()
}

/// `count` instances cycling through the generator families, each with
/// `red` and `blue` color classes.
pub fn suite<R: Rng>(rng: &mut R, count: usize, max_n: usize) -> Vec<(String, ColoredGraph)> {
    (0..count)
        .map(|i| {
            let (name, mut g) = family_instance(i, max_n, rng);
            add_random_colors(&mut g, &["red", "blue"], 0.4, rng);
            (name, g)
        })
        .collect()
}

/// Weak `r`-reachability by enumerating simple paths from `v` of length at
/// most `r` and keeping endpoints that are minimum on their path.
pub fn wreach_paths(g: &ColoredGraph, ord: &VertexOrder, r: usize, v: usize) -> BTreeSet<usize> {
    fn go(
        g: &ColoredGraph,
        ord: &VertexOrder,
        left: usize,
        path: &mut Vec<usize>,
        min: usize,
        out: &mut BTreeSet<usize>,
    ) {
        let w = *path.last().unwrap();
        if ord.rank(w) == min {
            out.insert(w);
        }
        if left == 0 {
            return;
        }
        for &x in g.neighbors(w) {
            if !path.contains(&x) {
                path.push(x);
                go(g, ord, left - 1, path, min.min(ord.rank(x)), out);
                path.pop();
            }
        }
    }
    let mut out = BTreeSet::new();
    go(g, ord, r, &mut vec![v], ord.rank(v), &mut out);
    out
}

pub fn wcol_paths(g: &ColoredGraph, ord: &VertexOrder, r: usize) -> usize {
    (0..g.n())
        .map(|v| wreach_paths(g, ord, r, v).len())
        .max()
        .unwrap_or(0)
}

/// Calls `f` on every permutation of `0..n`.
pub fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize])) {
    fn go(items: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
        if k == items.len() {
            f(items);
            return;
        }
        for i in k..items.len() {
            items.swap(k, i);
            go(items, k + 1, f);
            items.swap(k, i);
        }
    }
    go(&mut (0..n).collect(), 0, &mut f);
}

/// `wcol_r(G)` as a minimum over all `n!` orders.
pub fn wcol_all_orders(g: &ColoredGraph, r: usize) -> usize {
    let mut best = usize::MAX;
    for_each_permutation(g.n(), |p| {
        let ord = VertexOrder::from_sequence(p.to_vec()).unwrap();
        best = best.min(wcol_paths(g, &ord, r));
    });
    if g.n() == 0 {
        0
    } else {
        best
    }
}

/// Treedepth by the recursion `td = 1 + min_v td(G - v)` on connected
/// graphs and the maximum over components otherwise, memoized on bitmasks.
pub fn treedepth_recursive(g: &ColoredGraph) -> usize {
    assert!(g.n() <= 20);
    let adj: Vec<u32> = (0..g.n())
        .map(|v| g.neighbors(v).iter().fold(0, |m, &u| m | 1 << u))
        .collect();
    let mut memo = HashMap::new();
    td_mask(&adj, (1u32 << g.n()) - 1, &mut memo)
}

fn td_mask(adj: &[u32], set: u32, memo: &mut HashMap<u32, usize>) -> usize {
    if set == 0 {
        return 0;
    }
    if let Some(&v) = memo.get(&set) {
        return v;
    }
    // component of the lowest vertex
    let start = set & set.wrapping_neg();
    let mut comp = start;
    loop {
        let mut next = comp;
        for v in 0..adj.len() {
            if comp >> v & 1 == 1 {
                next |= adj[v] & set;
            }
        }
        if next == comp {
            break;
        }
        comp = next;
    }
    let value = if comp != set {
        td_mask(adj, comp, memo).max(td_mask(adj, set & !comp, memo))
    } else {
        1 + (0..adj.len())
            .filter(|v| set >> v & 1 == 1)
            .map(|v| td_mask(adj, set & !(1 << v), memo))
            .min()
            .unwrap()
    };
    memo.insert(set, value);
    value
}

/// One representative of every graph on `n` vertices up to isomorphism.
pub fn graphs_up_to_iso(n: usize) -> Vec<ColoredGraph> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let mut perms = Vec::new();
    for_each_permutation(n, |p| perms.push(p.to_vec()));
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u64..1 << pairs.len() {
        let edges: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        let canon = perms
            .iter()
            .map(|p| {
                let mut e: Vec<(usize, usize)> = edges
                    .iter()
                    .map(|&(u, v)| (p[u].min(p[v]), p[u].max(p[v])))
                    .collect();
                e.sort_unstable();
                e
            })
            .min()
            .unwrap();
        if seen.insert(canon) {
            out.push(ColoredGraph::from_edges(n, &edges).unwrap());
        }
    }
    out
}

/// Direct recursive evaluation of a formula.
pub fn eval(g: &ColoredGraph, f: &Formula, asg: &mut BTreeMap<String, usize>) -> bool {
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Edge(a, b) => g.has_edge(asg[a], asg[b]),
        Formula::Eq(a, b) => asg[a] == asg[b],
        Formula::Color(c, a) => g.color(c).is_some_and(|s| s.contains(&asg[a])),
        Formula::Not(inner) => !eval(g, inner, asg),
        Formula::And(a, b) => eval(g, a, asg) && eval(g, b, asg),
        Formula::Or(a, b) => eval(g, a, asg) || eval(g, b, asg),
        Formula::Exists(y, body) | Formula::Forall(y, body) => {
            let old = asg.get(y).copied();
            let want = matches!(f, Formula::Exists(..));
            let mut result = !want;
            for v in 0..g.n() {
                asg.insert(y.clone(), v);
                if eval(g, body, asg) == want {
                    result = want;
                    break;
                }
            }
            match old {
                Some(o) => asg.insert(y.clone(), o),
                None => asg.remove(y),
            };
            result
        }
    }
}

/// The interpretation of `phi(x, y)` by direct evaluation on every pair.
pub fn interpret_naive(g: &ColoredGraph, phi: &Formula) -> DirectedGraph {
    let mut d = DirectedGraph::new(g.n());
    for u in 0..g.n() {
        for v in 0..g.n() {
            if u == v {
                continue;
            }
            let mut asg = BTreeMap::from([("x".to_string(), u), ("y".to_string(), v)]);
            if eval(g, phi, &mut asg) {
                d.add_arc(u, v);
            }
        }
    }
    d
}

/// Whether every path of length at most `r` between `u` and `v` meets
/// `sep`, by enumerating simple paths from `u` that avoid `sep`.
pub fn separated_paths(
    g: &ColoredGraph,
    u: usize,
    v: usize,
    r: usize,
    sep: &BTreeSet<usize>,
) -> bool {
    fn reach(
        g: &ColoredGraph,
        path: &mut Vec<usize>,
        left: usize,
        target: usize,
        sep: &BTreeSet<usize>,
    ) -> bool {
        let w = *path.last().unwrap();
        if w == target {
            return true;
        }
        if left == 0 {
            return false;
        }
        for &x in g.neighbors(w) {
            if !path.contains(&x) && !sep.contains(&x) {
                path.push(x);
                let hit = reach(g, path, left - 1, target, sep);
                path.pop();
                if hit {
                    return true;
                }
            }
        }
        false
    }
    if sep.contains(&u) || sep.contains(&v) {
        return true;
    }
    !reach(g, &mut vec![u], r, v, sep)
}

/// Induced subgraph on `keep` as a digraph on the original ids.
pub fn induced_digraph(d: &DirectedGraph, keep: &BTreeSet<usize>) -> BTreeSet<(usize, usize)> {
    d.arcs
        .iter()
        .copied()
        .filter(|(u, v)| keep.contains(u) && keep.contains(v))
        .collect()
}

/// Decodes a labeled quasi-bush by walking parent links. With `transposed`
/// false, `(u, v)` is an arc when the lowest ancestor `w` of `u` pointed to
/// by `v` accepts the label of `u`; with `transposed` true the roles of the
/// two leaves are swapped, so `(u, v)` is an arc when the lowest ancestor of
/// `v` pointed to by `u` accepts the label of `v`.
pub fn decode_quasibush_naive(
    b: &shrubkit::quasibush::QuasiBush,
    transposed: bool,
) -> DirectedGraph {
    let n = b.universe();
    let mut d = DirectedGraph::new(n);
    let leaf: BTreeMap<usize, usize> = b.leaves.iter().map(|(&id, l)| (l.vertex, id)).collect();
    let accepts = |a: usize, c: usize| {
        // lowest ancestor of leaf(a) pointed to by leaf(c), tested on the label of a
        let mut x = Some(leaf[&a]);
        while let Some(w) = x {
            if let Some(set) = b.pointers.get(&(leaf[&c], w)) {
                return set.contains(&b.leaves[&leaf[&a]].label);
            }
            x = b.nodes[w].parent;
        }
        false
    };
    for u in leaf.keys().copied() {
        for v in leaf.keys().copied().filter(|&v| v != u) {
            let arc = if transposed {
                accepts(v, u)
            } else {
                accepts(u, v)
            };
            if arc {
                d.add_arc(u, v);
            }
        }
    }
    d
}

/// Depth (in vertices) of the rooted forest given by `parent` if it is an
/// elimination forest of `g`: every edge joins an ancestor to a descendant.
pub fn elimination_forest_depth(g: &ColoredGraph, parent: &[Option<usize>]) -> Option<usize> {
    if parent.len() != g.n() {
        return None;
    }
    let chain = |mut v: usize| {
        let mut out = vec![v];
        while let Some(p) = parent[v] {
            if out.len() > g.n() {
                return None;
            }
            out.push(p);
            v = p;
        }
        Some(out)
    };
    let chains: Vec<Vec<usize>> = (0..g.n()).map(chain).collect::<Option<_>>()?;
    for u in 0..g.n() {
        for &v in g.neighbors(u) {
            if !chains[u].contains(&v) && !chains[v].contains(&u) {
                return None;
            }
        }
    }
    Some(chains.iter().map(Vec::len).max().unwrap_or(0))
}
