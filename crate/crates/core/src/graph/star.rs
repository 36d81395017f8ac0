use std::collections::BTreeSet;

use super::{degeneracy_ordering, ColoredGraph};

/// Greedy star coloring: a proper coloring in which any two color classes
/// together induce a star forest. Vertices are colored in reverse peeling
/// order, each taking the smallest color that keeps every bicolored
/// component through it a star.
pub fn star_coloring(g: &ColoredGraph) -> Vec<usize> {
    let (_, mut order) = degeneracy_ordering(g);
    order.reverse();
    let mut color: Vec<Option<usize>> = vec![None; g.n()];
    let mut used = 0;
    for &v in &order {
        let chosen = (0..=used)
            .find(|&c| {
                if g.neighbors(v).iter().any(|&w| color[w] == Some(c)) {
                    return false;
                }
                color[v] = Some(c);
                let ok = (0..used).filter(|&d| d != c).all(|d| {
                    let pair = |w: usize| color[w] == Some(c) || color[w] == Some(d);
                    component_is_star(g, v, pair)
                });
                color[v] = None;
                ok
            })
            .expect("a fresh color is always admissible");
        color[v] = Some(chosen);
        used = used.max(chosen + 1);
    }
    let coloring: Vec<usize> = color
        .into_iter()
        .map(|c| c.expect("every vertex is colored"))
        .collect();
    debug_assert!(is_star_coloring(g, &coloring));
    coloring
}

/// Whether `coloring` is proper and every two classes induce a star forest.
pub fn is_star_coloring(g: &ColoredGraph, coloring: &[usize]) -> bool {
    if coloring.len() != g.n() || g.edges().any(|(u, v)| coloring[u] == coloring[v]) {
        return false;
    }
    let classes: BTreeSet<usize> = coloring.iter().copied().collect();
    for &a in &classes {
        for &b in classes.range(a + 1..) {
            let inside = |w: usize| coloring[w] == a || coloring[w] == b;
            let mut seen = vec![false; g.n()];
            for v in (0..g.n()).filter(|&v| inside(v)) {
                if seen[v] {
                    continue;
                }
                let comp = component(g, v, inside);
                for &w in &comp {
                    seen[w] = true;
                }
                if !is_star(g, &comp) {
                    return false;
                }
            }
        }
    }
    true
}

fn component<F: Fn(usize) -> bool>(g: &ColoredGraph, v: usize, inside: F) -> Vec<usize> {
    let mut comp = vec![v];
    let mut seen = BTreeSet::from([v]);
    let mut i = 0;
    while i < comp.len() {
        let u = comp[i];
        i += 1;
        for &w in g.neighbors(u) {
            if inside(w) && seen.insert(w) {
                comp.push(w);
            }
        }
    }
    comp
}

fn component_is_star<F: Fn(usize) -> bool>(g: &ColoredGraph, v: usize, inside: F) -> bool {
    is_star(g, &component(g, v, inside))
}

/// A connected vertex set induces a star iff it is a tree with a vertex
/// adjacent to all others.
fn is_star(g: &ColoredGraph, comp: &[usize]) -> bool {
    let k = comp.len();
    if k <= 2 {
        return true;
    }
    let set: BTreeSet<usize> = comp.iter().copied().collect();
    let inner_deg = |u: usize| g.neighbors(u).iter().filter(|w| set.contains(w)).count();
    let edges: usize = comp.iter().map(|&u| inner_deg(u)).sum::<usize>() / 2;
    edges == k - 1 && comp.iter().any(|&u| inner_deg(u) == k - 1)
}
