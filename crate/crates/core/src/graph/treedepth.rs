//! Exact treedepth by branch and bound over elimination forests.
//!
//! `td(S) = 1 + min_v max_C td(C)` over the components `C` of `S - v`, with
//! memoization on vertex subsets of each component. Subsets are `u64` masks,
//! so the per-component cap can never exceed 64.

use std::collections::HashMap;

use super::ColoredGraph;
use crate::error::{Error, Result};

pub const DEFAULT_TREEDEPTH_CAP: usize = 25;

/// A rooted forest on the vertices of a graph. Depth counts nodes, so a single
/// vertex has depth 1 and the empty forest depth 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreedepthForest {
    pub parent: Vec<Option<usize>>,
    pub depth: usize,
}

impl TreedepthForest {
    /// Builds a forest from a parent map and computes its depth. Fails on
    /// cycles or out-of-range parents.
    pub fn from_parents(parent: Vec<Option<usize>>) -> Result<Self> {
        let levels = node_levels(&parent)?;
        let depth = levels.iter().copied().max().unwrap_or(0);
        Ok(TreedepthForest { parent, depth })
    }

    /// Checks acyclicity, the recorded depth, and that every edge of `g`
    /// joins an ancestor-descendant pair.
    pub fn validate(&self, g: &ColoredGraph) -> Result<()> {
        if self.parent.len() != g.n() {
            return Err(Error::Structure(format!(
                "forest has {} nodes but graph has {}",
                self.parent.len(),
                g.n()
            )));
        }
        let levels = node_levels(&self.parent)?;
        let depth = levels.iter().copied().max().unwrap_or(0);
        if depth != self.depth {
            return Err(Error::Structure(format!(
                "recorded depth {} but forest depth is {depth}",
                self.depth
            )));
        }
        for (u, v) in g.edges() {
            let (deep, shallow) = if levels[u] >= levels[v] {
                (u, v)
            } else {
                (v, u)
            };
            let mut x = deep;
            while levels[x] > levels[shallow] {
                x = self.parent[x].expect("non-root nodes have parents");
            }
            if x != shallow {
                return Err(Error::Structure(format!(
                    "edge {u}-{v} is not ancestor-related"
                )));
            }
        }
        Ok(())
    }

    /// The forest of depth-first search trees, which is always a valid
    /// elimination forest because undirected DFS has no cross edges.
    pub fn dfs(g: &ColoredGraph) -> Self {
        let mut parent = vec![None; g.n()];
        let mut seen = vec![false; g.n()];
        for root in 0..g.n() {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let mut stack = vec![(root, 0usize)];
            while let Some(&mut (u, ref mut next)) = stack.last_mut() {
                if let Some(&w) = g.neighbors(u).get(*next) {
                    *next += 1;
                    if !seen[w] {
                        seen[w] = true;
                        parent[w] = Some(u);
                        stack.push((w, 0));
                    }
                } else {
                    stack.pop();
                }
            }
        }
        Self::from_parents(parent).expect("dfs parents form a forest")
    }
}

fn node_levels(parent: &[Option<usize>]) -> Result<Vec<usize>> {
    let n = parent.len();
    let mut level = vec![0usize; n];
    for start in 0..n {
        if level[start] != 0 {
            continue;
        }
        let mut chain = Vec::new();
        let mut x = start;
        loop {
            if level[x] != 0 {
                break;
            }
            if chain.len() > n {
                return Err(Error::Structure("forest parent map has a cycle".into()));
            }
            chain.push(x);
            match parent[x] {
                Some(p) if p >= n => return Err(Error::OutOfRange { vertex: p, n }),
                Some(p) => x = p,
                None => break,
            }
        }
        let mut base = match parent[*chain.last().expect("chain is nonempty")] {
            Some(p) if level[p] != 0 => level[p],
            _ => 0,
        };
        for &y in chain.iter().rev() {
            base += 1;
            level[y] = base;
        }
    }
    Ok(level)
}

/// Exact treedepth with the default per-component cap.
pub fn treedepth(g: &ColoredGraph) -> Result<(usize, TreedepthForest)> {
    treedepth_with_cap(g, DEFAULT_TREEDEPTH_CAP)
}

/// Exact treedepth and a witnessing forest. Every connected component must
/// have at most `cap` vertices (and `cap` is clamped to 64).
pub fn treedepth_with_cap(g: &ColoredGraph, cap: usize) -> Result<(usize, TreedepthForest)> {
    let cap = cap.min(64);
    let comps = g.components();
    if let Some(big) = comps.iter().find(|c| c.len() > cap) {
        return Err(Error::TooLarge {
            what: "exact treedepth solver",
            size: big.len(),
            cap,
        });
    }
    let mut parent = vec![None; g.n()];
    let mut best = 0;
    for comp in &comps {
        let (sub, map) = g.induced(comp);
        let mut solver = Solver::new(&sub);
        let full = if sub.n() == 64 {
            u64::MAX
        } else {
            (1u64 << sub.n()) - 1
        };
        let td = solver.solve(full, sub.n() as u32 + 1);
        best = best.max(td as usize);
        solver.rebuild(full, None, &mut |child, par| {
            parent[map[child]] = par.map(|p| map[p]);
        });
    }
    let forest = TreedepthForest::from_parents(parent)?;
    debug_assert_eq!(forest.depth, best);
    Ok((best, forest))
}

/// Exact treedepth of induced subgraphs of one host graph with at most 64
/// vertices. Solved subsets are memoized on host vertex masks, so overlapping
/// queries share work. Results equal [`treedepth_with_cap`] on the induced
/// subgraph.
pub(crate) struct SubsetTreedepth {
    solver: Solver,
}

impl SubsetTreedepth {
    pub(crate) fn new(g: &ColoredGraph) -> Option<Self> {
        (g.n() <= 64).then(|| SubsetTreedepth {
            solver: Solver::new(g),
        })
    }

    /// `vertices` must be sorted; the forest is indexed by position in it.
    pub(crate) fn treedepth(
        &mut self,
        vertices: &[usize],
        cap: usize,
    ) -> Result<(usize, TreedepthForest)> {
        let cap = cap.min(64);
        let set = vertices.iter().fold(0u64, |m, &v| m | 1 << v);
        let comps = self.solver.components(set);
        if let Some(big) = comps.iter().find(|c| c.count_ones() as usize > cap) {
            return Err(Error::TooLarge {
                what: "exact treedepth solver",
                size: big.count_ones() as usize,
                cap,
            });
        }
        let pos = |v: usize| {
            vertices
                .binary_search(&v)
                .expect("forest stays inside the subset")
        };
        let mut parent = vec![None; vertices.len()];
        let mut best = 0;
        for c in comps {
            best = best.max(self.solver.solve(c, c.count_ones() + 1) as usize);
            self.solver
                .rebuild(c, None, &mut |child, par| parent[pos(child)] = par.map(pos));
        }
        let forest = TreedepthForest::from_parents(parent)?;
        debug_assert_eq!(forest.depth, best);
        Ok((best, forest))
    }
}

struct Solver {
    adj: Vec<u64>,
    exact: HashMap<u64, (u32, u32)>,
    lower: HashMap<u64, u32>,
}

impl Solver {
    fn new(g: &ColoredGraph) -> Self {
        let adj = (0..g.n())
            .map(|v| g.neighbors(v).iter().fold(0u64, |m, &w| m | 1 << w))
            .collect();
        Solver {
            adj,
            exact: HashMap::new(),
            lower: HashMap::new(),
        }
    }

    fn components(&self, s: u64) -> Vec<u64> {
        let mut rest = s;
        let mut out = Vec::new();
        while rest != 0 {
            let mut comp = rest & rest.wrapping_neg();
            let mut frontier = comp;
            while frontier != 0 {
                let v = frontier.trailing_zeros() as usize;
                frontier &= frontier - 1;
                let new = self.adj[v] & rest & !comp;
                comp |= new;
                frontier |= new;
            }
            rest &= !comp;
            out.push(comp);
        }
        out
    }

    /// The larger of degeneracy + 1 and the path bound: a graph with a path
    /// on `k` vertices has treedepth at least `ceil(log2(k + 1))`.
    fn lower_bound(&self, s: u64) -> u32 {
        let k = self.dfs_path(s, self.dfs_path(s, s & s.wrapping_neg()).1).0;
        let path = u32::BITS - k.leading_zeros();
        self.contraction_degeneracy(s).max(path)
    }

    /// Contraction degeneracy + 1: repeatedly contract a minimum-degree
    /// vertex into its minimum-degree neighbor. Bounds treewidth + 1 from
    /// below, and so treedepth, and is never below degeneracy + 1.
    fn contraction_degeneracy(&self, s: u64) -> u32 {
        let mut adj: Vec<u64> = self.adj.iter().map(|&a| a & s).collect();
        let mut rest = s;
        let mut k = 0;
        while rest.count_ones() > 1 {
            let mut v = 0;
            let mut dv = u32::MAX;
            let mut it = rest;
            while it != 0 {
                let x = it.trailing_zeros() as usize;
                it &= it - 1;
                let d = adj[x].count_ones();
                if d < dv {
                    dv = d;
                    v = x;
                }
            }
            k = k.max(dv);
            rest &= !(1 << v);
            if dv == 0 {
                continue;
            }
            let mut u = 0;
            let mut du = u32::MAX;
            let mut it = adj[v];
            while it != 0 {
                let x = it.trailing_zeros() as usize;
                it &= it - 1;
                let d = adj[x].count_ones();
                if d < du {
                    du = d;
                    u = x;
                }
            }
            let nv = adj[v];
            let mut it = nv;
            while it != 0 {
                let w = it.trailing_zeros() as usize;
                it &= it - 1;
                adj[w] &= !(1 << v);
                if w != u {
                    adj[w] |= 1 << u;
                    adj[u] |= 1 << w;
                }
            }
            adj[v] = 0;
        }
        k + 1
    }

    /// Depth-first search inside `s` from `start`; root-to-node paths of the
    /// search tree are paths of the graph. Returns the deepest one's vertex
    /// count and its end.
    fn dfs_path(&self, s: u64, start: u64) -> (u32, u64) {
        let mut seen = start;
        let mut stack = vec![start.trailing_zeros() as usize];
        let mut best = (1, start);
        while let Some(&v) = stack.last() {
            let next = self.adj[v] & s & !seen;
            if next == 0 {
                stack.pop();
                continue;
            }
            let w = next & next.wrapping_neg();
            seen |= w;
            stack.push(w.trailing_zeros() as usize);
            if stack.len() as u32 > best.0 {
                best = (stack.len() as u32, w);
            }
        }
        best
    }

    /// Returns `td(s)` when it is below `ub`, otherwise some value `>= ub`.
    /// `s` must be connected and nonempty.
    fn solve(&mut self, s: u64, ub: u32) -> u32 {
        if s.count_ones() == 1 {
            return 1;
        }
        if let Some(&(td, _)) = self.exact.get(&s) {
            return td;
        }
        let lb = self
            .lower
            .get(&s)
            .copied()
            .unwrap_or(0)
            .max(self.lower_bound(s));
        if lb >= ub {
            return lb;
        }
        let mut order: Vec<(u32, u32)> = Vec::new();
        let mut it = s;
        while it != 0 {
            let v = it.trailing_zeros();
            it &= it - 1;
            order.push(((self.adj[v as usize] & s).count_ones(), v));
        }
        order.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        // If N(u) is inside N[w], swapping u and w in a tree where u is an
        // ancestor of w keeps it valid, so w is a root at least as good as u.
        // Such a w always precedes u in `order`, so the chosen root is the
        // same as without the filter.
        let dominated = |i: usize| {
            let u = order[i].1 as usize;
            order[..i].iter().any(|&(_, w)| {
                let w = w as usize;
                self.adj[u] & s & !(1 << w) & !(self.adj[w] & s) == 0
            })
        };
        let order: Vec<(u32, u32)> = (0..order.len())
            .filter(|&i| !dominated(i))
            .map(|i| order[i])
            .collect();

        let mut best = ub;
        let mut root = None;
        for &(_, v) in &order {
            let mut comps = self.components(s & !(1 << v));
            comps.sort_by_key(|c| std::cmp::Reverse(c.count_ones()));
            // need 1 + max td(C) < best
            let limit = best - 1;
            let mut worst = 0;
            let mut ok = true;
            for c in comps {
                let t = self.solve(c, limit);
                if t >= limit {
                    ok = false;
                    break;
                }
                worst = worst.max(t);
            }
            if ok {
                best = worst + 1;
                root = Some(v);
                if best <= lb {
                    break;
                }
            }
        }
        match root {
            Some(v) => {
                self.exact.insert(s, (best, v));
                best
            }
            None => {
                self.lower.insert(s, ub);
                ub
            }
        }
    }

    fn rebuild(&self, s: u64, par: Option<usize>, emit: &mut dyn FnMut(usize, Option<usize>)) {
        let root = if s.count_ones() == 1 {
            s.trailing_zeros()
        } else {
            self.exact
                .get(&s)
                .expect("solved components are memoized")
                .1
        };
        emit(root as usize, par);
        for c in self.components(s & !(1 << root)) {
            self.rebuild(c, Some(root as usize), emit);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_paths() {
        let (td, f) = treedepth(&ColoredGraph::new(1)).unwrap();
        assert_eq!((td, f.depth), (1, 1));

        let p3 = ColoredGraph::path(3);
        let (td, f) = treedepth(&p3).unwrap();
        assert_eq!(td, 2);
        assert_eq!(f.parent, vec![Some(1), None, Some(1)]);
        f.validate(&p3).unwrap();

        assert_eq!(treedepth(&ColoredGraph::path(4)).unwrap().0, 3);
        assert_eq!(treedepth(&ColoredGraph::path(7)).unwrap().0, 3);
        assert_eq!(treedepth(&ColoredGraph::path(8)).unwrap().0, 4);
        assert_eq!(treedepth(&ColoredGraph::complete(5)).unwrap().0, 5);
        assert_eq!(treedepth(&ColoredGraph::new(0)).unwrap().0, 0);
    }

    #[test]
    fn cap_is_enforced() {
        let g = ColoredGraph::path(30);
        assert!(matches!(
            treedepth(&g),
            Err(Error::TooLarge {
                size: 30,
                cap: 25,
                ..
            })
        ));
        // components are solved separately
        let mut two = ColoredGraph::new(40);
        for i in 1..20 {
            two.add_edge(i - 1, i).unwrap();
            two.add_edge(20 + i - 1, 20 + i).unwrap();
        }
        assert_eq!(treedepth(&two).unwrap().0, 5);
    }

    #[test]
    fn dfs_forest_is_valid() {
        let g = ColoredGraph::cycle(9);
        let f = TreedepthForest::dfs(&g);
        f.validate(&g).unwrap();
        assert_eq!(f.depth, 9);
    }

    #[test]
    fn validate_rejects_bad_forests() {
        let g = ColoredGraph::path(3);
        let flat = TreedepthForest::from_parents(vec![None, None, None]).unwrap();
        assert!(flat.validate(&g).is_err());
        assert!(TreedepthForest::from_parents(vec![Some(1), Some(0)]).is_err());
    }
}
