//! Vertex orders, weak reachability and weak coloring numbers.

use std::cmp::Reverse;
use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{bfs_distances, ColoredGraph};
use crate::par;

/// Largest vertex count accepted by [`exact_wcol`].
pub const DEFAULT_EXACT_WCOL_CAP: usize = 10;

/// A total order on `0..n`, stored both as the sequence of vertices from
/// smallest to largest and as the inverse rank map.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VertexOrder {
    order: Vec<usize>,
    rank: Vec<usize>,
}

impl VertexOrder {
    pub fn identity(n: usize) -> Self {
        VertexOrder {
            order: (0..n).collect(),
            rank: (0..n).collect(),
        }
    }

    /// `order[i]` is the vertex of rank `i`; must be a permutation.
    pub fn from_sequence(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        let mut rank = vec![usize::MAX; n];
        for (i, &v) in order.iter().enumerate() {
            if v >= n {
                return Err(Error::InvalidOrder(format!(
                    "vertex {v} out of range for {n} vertices"
                )));
            }
            if rank[v] != usize::MAX {
                return Err(Error::InvalidOrder(format!("vertex {v} listed twice")));
            }
            rank[v] = i;
        }
        Ok(VertexOrder { order, rank })
    }

    /// Parses `order v0 v1 ...` (comments with `#` allowed).
    pub fn parse(text: &str) -> Result<Self> {
        let body: Vec<&str> = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty())
            .collect();
        let [line] = body.as_slice() else {
            return Err(Error::InvalidOrder("expected a single `order` line".into()));
        };
        let mut words = line.split_whitespace();
        if words.next() != Some("order") {
            return Err(Error::InvalidOrder("line must start with `order`".into()));
        }
        Self::from_sequence(parse_list(words)?)
    }

    /// Parses a comma-separated vertex list such as `2,0,1`.
    pub fn from_csv(text: &str) -> Result<Self> {
        Self::from_sequence(parse_list(
            text.split(',').map(str::trim).filter(|w| !w.is_empty()),
        )?)
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    #[inline]
    pub fn rank(&self, v: usize) -> usize {
        self.rank[v]
    }

    /// Vertices from smallest to largest.
    pub fn as_slice(&self) -> &[usize] {
        &self.order
    }

    #[inline]
    pub fn less(&self, u: usize, v: usize) -> bool {
        self.rank[u] < self.rank[v]
    }

    /// Sorts vertices increasingly in this order.
    pub fn sort(&self, vs: &mut [usize]) {
        vs.sort_by_key(|&v| self.rank[v]);
    }

    pub fn check_size(&self, g: &ColoredGraph) -> Result<()> {
        if self.len() != g.n() {
            return Err(Error::InvalidOrder(format!(
                "order has {} vertices, graph has {}",
                self.len(),
                g.n()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for VertexOrder {
    /// The order file form, `order v0 v1 ...`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("order")?;
        for v in &self.order {
            write!(f, " {v}")?;
        }
        Ok(())
    }
}

fn parse_list<'a, I: Iterator<Item = &'a str>>(words: I) -> Result<Vec<usize>> {
    words
        .map(|w| {
            w.parse()
                .map_err(|_| Error::InvalidOrder(format!("`{w}` is not a vertex")))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Reverse min-degree peeling.
    Degeneracy,
    /// Breadth-first from the lowest vertex of each component.
    Bfs,
    /// Decreasing degree.
    SortedDegree,
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "degeneracy" => Ok(Strategy::Degeneracy),
            "bfs" => Ok(Strategy::Bfs),
            "sorted-degree" => Ok(Strategy::SortedDegree),
            other => Err(Error::UnknownStrategy(other.to_string())),
        }
    }
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::Degeneracy, Strategy::Bfs, Strategy::SortedDegree];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Degeneracy => "degeneracy",
            Strategy::Bfs => "bfs",
            Strategy::SortedDegree => "sorted-degree",
        }
    }
}

pub fn heuristic_order(g: &ColoredGraph, strategy: Strategy) -> VertexOrder {
    let n = g.n();
    let seq = match strategy {
        Strategy::Degeneracy => {
            // peel ties toward the largest id so the reversed order prefers small ids
            let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
            let mut queue: BTreeSet<(usize, Reverse<usize>)> =
                (0..n).map(|v| (deg[v], Reverse(v))).collect();
            let mut gone = vec![false; n];
            let mut peel = Vec::with_capacity(n);
            while let Some((_, Reverse(v))) = queue.pop_first() {
                gone[v] = true;
                peel.push(v);
                for &w in g.neighbors(v) {
                    if !gone[w] {
                        queue.remove(&(deg[w], Reverse(w)));
                        deg[w] -= 1;
                        queue.insert((deg[w], Reverse(w)));
                    }
                }
            }
            peel.reverse();
            peel
        }
        Strategy::Bfs => {
            let mut seen = vec![false; n];
            let mut seq = Vec::with_capacity(n);
            for s in 0..n {
                if seen[s] {
                    continue;
                }
                seen[s] = true;
                let mut queue = VecDeque::from([s]);
                while let Some(u) = queue.pop_front() {
                    seq.push(u);
                    for &w in g.neighbors(u) {
                        if !seen[w] {
                            seen[w] = true;
                            queue.push_back(w);
                        }
                    }
                }
            }
            seq
        }
        Strategy::SortedDegree => {
            let mut seq: Vec<usize> = (0..n).collect();
            seq.sort_by_key(|&v| (Reverse(g.degree(v)), v));
            seq
        }
    };
    VertexOrder::from_sequence(seq).expect("heuristics produce permutations")
}

/// Vertices within distance `r` of `u` in the subgraph induced by
/// `{w : w >= u}`: exactly the `v` with `u` in `wreach_r[v]`.
fn reached_from(g: &ColoredGraph, ord: &VertexOrder, r: usize, u: usize) -> Vec<usize> {
    let ru = ord.rank(u);
    bfs_distances(g, u, r, |w| ord.rank(w) >= ru)
        .into_iter()
        .enumerate()
        .filter_map(|(v, d)| d.map(|_| v))
        .collect()
}

/// `wreach_r[v]` for every vertex, each sorted increasingly by `ord`.
pub fn wreach_all(g: &ColoredGraph, ord: &VertexOrder, r: usize) -> Vec<Vec<usize>> {
    let reached = par::map_range(g.n(), |u| reached_from(g, ord, r, u));
    let mut out = vec![Vec::new(); g.n()];
    for &u in ord.as_slice() {
        for &v in &reached[u] {
            out[v].push(u);
        }
    }
    out
}

/// Vertices weakly r-reachable from `v`, sorted increasingly by `ord`.
pub fn wreach(g: &ColoredGraph, ord: &VertexOrder, r: usize, v: usize) -> Vec<usize> {
    let rv = ord.rank(v);
    let mut out: Vec<usize> = bfs_distances(g, v, r, |_| true)
        .into_iter()
        .enumerate()
        .filter(|&(u, d)| d.is_some() && ord.rank(u) <= rv)
        .map(|(u, _)| u)
        .filter(|&u| reached_from(g, ord, r, u).binary_search(&v).is_ok())
        .collect();
    ord.sort(&mut out);
    out
}

pub fn wcol_of_order(g: &ColoredGraph, ord: &VertexOrder, r: usize) -> usize {
    wreach_all(g, ord, r)
        .iter()
        .map(Vec::len)
        .max()
        .unwrap_or(0)
}

pub fn exact_wcol(g: &ColoredGraph, r: usize) -> Result<(usize, VertexOrder)> {
    exact_wcol_with_cap(g, r, DEFAULT_EXACT_WCOL_CAP)
}

/// Minimum of `wcol_r` over all orders, with a witness order. Branch and
/// bound that fixes the order from the smallest vertex up: placing `u`
/// next adds `u` to `wreach_r[v]` exactly for the `v` within distance `r`
/// of `u` among the still unplaced vertices, and those counts never
/// decrease.
pub fn exact_wcol_with_cap(g: &ColoredGraph, r: usize, cap: usize) -> Result<(usize, VertexOrder)> {
    let n = g.n();
    if n > cap.min(63) {
        return Err(Error::TooLarge {
            what: "exact weak coloring search",
            size: n,
            cap: cap.min(63),
        });
    }
    if n == 0 {
        return Ok((0, VertexOrder::identity(0)));
    }
    let mut best: Option<(usize, VertexOrder)> = None;
    for s in Strategy::ALL {
        let ord = heuristic_order(g, s);
        let w = wcol_of_order(g, &ord, r);
        if best.as_ref().is_none_or(|(b, _)| w < *b) {
            best = Some((w, ord));
        }
    }
    let (mut best_val, mut best_ord) = best.expect("at least one heuristic ran");
    let adj: Vec<u64> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0, |m, &w| m | 1 << w))
        .collect();
    let mut counts = vec![0usize; n];
    let mut prefix = Vec::with_capacity(n);
    search(
        &adj,
        r,
        (1u64 << n) - 1,
        &mut counts,
        &mut prefix,
        &mut best_val,
        &mut best_ord,
    );
    Ok((best_val, best_ord))
}

fn ball_mask(adj: &[u64], r: usize, src: usize, allowed: u64) -> u64 {
    let mut seen = 1u64 << src;
    let mut frontier = seen;
    for _ in 0..r {
        let mut next = 0;
        let mut it = frontier;
        while it != 0 {
            let v = it.trailing_zeros() as usize;
            it &= it - 1;
            next |= adj[v];
        }
        next &= allowed & !seen;
        if next == 0 {
            break;
        }
        seen |= next;
        frontier = next;
    }
    seen
}

fn search(
    adj: &[u64],
    r: usize,
    remaining: u64,
    counts: &mut [usize],
    prefix: &mut Vec<usize>,
    best_val: &mut usize,
    best_ord: &mut VertexOrder,
) {
    if remaining == 0 {
        let worst = counts.iter().copied().max().unwrap_or(0);
        if worst < *best_val {
            *best_val = worst;
            *best_ord =
                VertexOrder::from_sequence(prefix.clone()).expect("prefix is a permutation");
        }
        return;
    }
    let mut options: Vec<(usize, usize, u64)> = Vec::new();
    let mut it = remaining;
    while it != 0 {
        let u = it.trailing_zeros() as usize;
        it &= it - 1;
        let ball = ball_mask(adj, r, u, remaining);
        let mut worst = 0;
        let mut b = ball;
        while b != 0 {
            let v = b.trailing_zeros() as usize;
            b &= b - 1;
            worst = worst.max(counts[v] + 1);
        }
        if worst < *best_val {
            options.push((worst, u, ball));
        }
    }
    options.sort_unstable();
    for (worst, u, ball) in options {
        if worst >= *best_val {
            break;
        }
        let mut b = ball;
        while b != 0 {
            let v = b.trailing_zeros() as usize;
            b &= b - 1;
            counts[v] += 1;
        }
        prefix.push(u);
        search(
            adj,
            r,
            remaining & !(1 << u),
            counts,
            prefix,
            best_val,
            best_ord,
        );
        prefix.pop();
        let mut b = ball;
        while b != 0 {
            let v = b.trailing_zeros() as usize;
            b &= b - 1;
            counts[v] -= 1;
        }
    }
}

/// Comparison of a given order against the universal bound
/// `(2r+1)^r * wcol_{2r}(G)^(4r^2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniversalReport {
    pub r: usize,
    pub lhs: usize,
    pub wcol_2r: usize,
    /// Saturates at `u128::MAX`.
    pub rhs: u128,
    pub holds: bool,
}

pub fn check_universal_inequality(
    g: &ColoredGraph,
    ord: &VertexOrder,
    r: usize,
) -> Result<UniversalReport> {
    check_universal_inequality_with_cap(g, ord, r, DEFAULT_EXACT_WCOL_CAP)
}

pub fn check_universal_inequality_with_cap(
    g: &ColoredGraph,
    ord: &VertexOrder,
    r: usize,
    cap: usize,
) -> Result<UniversalReport> {
    ord.check_size(g)?;
    let (wcol_2r, _) = exact_wcol_with_cap(g, 2 * r, cap)?;
    let lhs = wcol_of_order(g, ord, r);
    let rhs = sat_pow(2 * r as u128 + 1, r).saturating_mul(sat_pow(wcol_2r as u128, 4 * r * r));
    Ok(UniversalReport {
        r,
        lhs,
        wcol_2r,
        rhs,
        holds: lhs as u128 <= rhs,
    })
}

/// A named numeric inequality `lhs <= rhs` from a structural check.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Inequality {
    pub name: String,
    pub lhs: u128,
    pub rhs: u128,
    pub holds: bool,
}

impl Inequality {
    pub fn new(name: impl Into<String>, lhs: u128, rhs: u128) -> Self {
        Inequality {
            name: name.into(),
            lhs,
            rhs,
            holds: lhs <= rhs,
        }
    }
}

pub(crate) fn sat_pow(base: u128, exp: usize) -> u128 {
    (0..exp).fold(1u128, |acc, _| acc.saturating_mul(base))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3_id() -> (ColoredGraph, VertexOrder) {
        (ColoredGraph::path(3), VertexOrder::identity(3))
    }

    #[test]
    fn wreach_examples() {
        let (g, ord) = p3_id();
        assert_eq!(wreach(&g, &ord, 1, 2), vec![1, 2]);
        assert_eq!(wreach(&g, &ord, 2, 2), vec![0, 1, 2]);
        assert_eq!(wreach(&g, &ord, 0, 1), vec![1]);
        assert_eq!(wreach_all(&g, &ord, 2)[2], vec![0, 1, 2]);
    }

    #[test]
    fn wcol_examples() {
        let (g, ord) = p3_id();
        assert_eq!(wcol_of_order(&g, &ord, 1), 2);
        assert_eq!(wcol_of_order(&ColoredGraph::cycle(5), &ord_n(5), 0), 1);
        let c4 = ColoredGraph::cycle(4);
        for seq in [[0, 1, 2, 3], [2, 0, 3, 1], [3, 1, 0, 2]] {
            let ord = VertexOrder::from_sequence(seq.to_vec()).unwrap();
            assert_eq!(wcol_of_order(&c4, &ord, 1), 3);
        }
    }

    fn ord_n(n: usize) -> VertexOrder {
        VertexOrder::identity(n)
    }

    #[test]
    fn exact_examples() {
        assert_eq!(exact_wcol(&ColoredGraph::new(1), 4).unwrap().0, 1);
        assert_eq!(exact_wcol(&ColoredGraph::path(3), 1).unwrap().0, 2);
        assert_eq!(exact_wcol(&ColoredGraph::cycle(4), 1).unwrap().0, 3);
        let (w, ord) = exact_wcol(&ColoredGraph::path(7), 2).unwrap();
        assert_eq!(wcol_of_order(&ColoredGraph::path(7), &ord, 2), w);
        assert!(matches!(
            exact_wcol(&ColoredGraph::path(11), 1),
            Err(Error::TooLarge { size: 11, .. })
        ));
    }

    #[test]
    fn heuristics() {
        assert_eq!(
            heuristic_order(&ColoredGraph::new(4), Strategy::Degeneracy),
            VertexOrder::identity(4)
        );
        let star = ColoredGraph::star(3);
        assert_eq!(
            heuristic_order(&star, Strategy::SortedDegree).as_slice(),
            &[0, 1, 2, 3]
        );
        assert_eq!(
            heuristic_order(&ColoredGraph::path(4), Strategy::Bfs).as_slice(),
            &[0, 1, 2, 3]
        );
        assert!(matches!(
            "random".parse::<Strategy>(),
            Err(Error::UnknownStrategy(_))
        ));
    }

    #[test]
    fn order_parsing() {
        let ord = VertexOrder::parse("# c\norder 2 0 1\n").unwrap();
        assert_eq!(ord.as_slice(), &[2, 0, 1]);
        assert_eq!(ord.rank(0), 1);
        assert_eq!(ord.to_string(), "order 2 0 1");
        assert_eq!(
            VertexOrder::from_csv("0, 1,2").unwrap(),
            VertexOrder::identity(3)
        );
        assert!(VertexOrder::from_csv("0,0").is_err());
        assert!(VertexOrder::parse("order 0 2").is_err());
    }

    #[test]
    fn universal_examples() {
        let k1 = ColoredGraph::new(1);
        let rep = check_universal_inequality(&k1, &VertexOrder::identity(1), 1).unwrap();
        assert_eq!((rep.lhs, rep.rhs, rep.holds), (1, 3, true));
        let (g, ord) = p3_id();
        let rep = check_universal_inequality(&g, &ord, 1).unwrap();
        assert_eq!(rep.lhs, 2);
        assert_eq!(rep.rhs, 3 * (rep.wcol_2r as u128).pow(4));
        assert!(rep.holds);
    }
}
