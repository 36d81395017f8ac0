//! Rank-q types as Ehrenfeucht-Fraisse type trees.
//!
//! The type of a tuple at rank 0 is its atomic type: equality pattern,
//! adjacency pattern and color memberships. At rank q it is the atomic type
//! together with the set of rank-(q-1) types of all one-element extensions.
//! Trees are identified by a 128-bit digest of a canonical encoding, so equal
//! trees get equal ids in any process and on any thread.

use std::fmt;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::graph::ColoredGraph;
use crate::par;

/// Default cap on the number of type-tree nodes a single call may visit.
pub const DEFAULT_TYPE_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeId(pub [u8; 16]);

impl fmt::Display for TypeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.0 {
            write!(f, "{b:02x}")?;
        }
        Ok(())
    }
}

pub fn qtype(g: &ColoredGraph, q: usize, tuple: &[usize]) -> Result<TypeId> {
    qtype_with_budget(g, q, tuple, DEFAULT_TYPE_BUDGET)
}

/// Type of `tuple` at rank `q`; fails with [`Error::Budget`] when the tree
/// would have more than `budget` nodes.
pub fn qtype_with_budget(
    g: &ColoredGraph,
    q: usize,
    tuple: &[usize],
    budget: u64,
) -> Result<TypeId> {
    if let Some(&v) = tuple.iter().find(|&&v| v >= g.n()) {
        return Err(Error::OutOfRange {
            vertex: v,
            n: g.n(),
        });
    }
    let mut nodes: u64 = 0;
    let mut level: u64 = 1;
    for _ in 0..=q {
        nodes = nodes.saturating_add(level);
        level = level.saturating_mul(g.n() as u64);
    }
    if nodes > budget {
        return Err(Error::Budget(budget));
    }
    if q == 0 {
        return Ok(tree(g, 0, &mut tuple.to_vec()));
    }
    let children = par::map_range(g.n(), |b| {
        let mut t = tuple.to_vec();
        t.push(b);
        tree(g, q - 1, &mut t)
    });
    Ok(finish(g, tuple, children))
}

fn tree(g: &ColoredGraph, q: usize, t: &mut Vec<usize>) -> TypeId {
    if q == 0 {
        let mut h = Sha256::new();
        h.update(b"L");
        atomic(g, t, &mut h);
        return digest(h);
    }
    let mut children = Vec::with_capacity(g.n());
    for b in 0..g.n() {
        t.push(b);
        children.push(tree(g, q - 1, t));
        t.pop();
    }
    finish(g, t, children)
}

fn finish(g: &ColoredGraph, t: &[usize], mut children: Vec<TypeId>) -> TypeId {
    children.sort_unstable();
    children.dedup();
    let mut h = Sha256::new();
    h.update(b"N");
    atomic(g, t, &mut h);
    h.update((children.len() as u64).to_le_bytes());
    for c in &children {
        h.update(c.0);
    }
    digest(h)
}

fn digest(h: Sha256) -> TypeId {
    let full = h.finalize();
    let mut id = [0u8; 16];
    id.copy_from_slice(&full[..16]);
    TypeId(id)
}

/// Canonical encoding of the atomic type of `t`.
fn atomic(g: &ColoredGraph, t: &[usize], h: &mut Sha256) {
    h.update((t.len() as u64).to_le_bytes());
    let mut bits = Vec::with_capacity(t.len() * t.len());
    for i in 0..t.len() {
        for j in i + 1..t.len() {
            bits.push(u8::from(t[i] == t[j]) | u8::from(g.has_edge(t[i], t[j])) << 1);
        }
    }
    h.update(&bits);
    for &v in t {
        for (name, class) in g.colors() {
            if class.contains(&v) {
                h.update(name.as_bytes());
                h.update([0]);
            }
        }
        h.update([0xff]);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_endpoints_agree() {
        let p3 = ColoredGraph::path(3);
        assert_eq!(qtype(&p3, 2, &[0]).unwrap(), qtype(&p3, 2, &[2]).unwrap());
        assert_ne!(qtype(&p3, 1, &[0]).unwrap(), qtype(&p3, 1, &[1]).unwrap());
    }

    #[test]
    fn rank_zero_sees_equality() {
        let g = ColoredGraph::new(3);
        assert_ne!(
            qtype(&g, 0, &[1, 1]).unwrap(),
            qtype(&g, 0, &[1, 2]).unwrap()
        );
        assert_eq!(
            qtype(&g, 0, &[0, 2]).unwrap(),
            qtype(&g, 0, &[1, 2]).unwrap()
        );
    }

    #[test]
    fn colors_matter() {
        let mut g = ColoredGraph::path(3);
        g.add_color("red", [0]).unwrap();
        assert_ne!(qtype(&g, 2, &[0]).unwrap(), qtype(&g, 2, &[2]).unwrap());
    }

    #[test]
    fn budget_is_enforced() {
        let g = ColoredGraph::new(100);
        assert_eq!(
            qtype_with_budget(&g, 2, &[], 10_000),
            Err(Error::Budget(10_000))
        );
        assert!(qtype_with_budget(&g, 2, &[], 10_101).is_ok());
    }
}
