//! Type-representative kernels: a small colored induced subgraph and a
//! rewritten formula that agree with the original formula on a target set.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::ColoredGraph;
use crate::logic::{
    existential_parts, for_each_tuple, normalize, phi_type, relativize, Evaluator, Formula,
};
use crate::par;

/// `A_psi`: for every distinct value of `{ a in A^xs : G |= psi(a, u) }`
/// over `u in V(G)` (with `u` bound to `y`), the smallest `u` realizing it.
/// `xs` are the free variables of `psi` other than `y`, in sorted order.
pub fn type_representatives(
    g: &ColoredGraph,
    psi: &Formula,
    y: &str,
    a: &BTreeSet<usize>,
) -> Result<BTreeSet<usize>> {
    Ok(type_classes(g, psi, y, a)?.into_values().collect())
}

/// Distinct types mapped to their smallest witness.
fn type_classes(
    g: &ColoredGraph,
    psi: &Formula,
    y: &str,
    a: &BTreeSet<usize>,
) -> Result<BTreeMap<BTreeSet<Vec<usize>>, usize>> {
    let xs: Vec<String> = psi.free_vars().into_iter().filter(|v| v != y).collect();
    let ys = [y.to_string()];
    let types = par::map_range(g.n(), |u| phi_type(g, psi, &ys, &[u], &xs, a))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let mut classes = BTreeMap::new();
    for (u, t) in types.into_iter().enumerate() {
        classes.entry(t).or_insert(u);
    }
    Ok(classes)
}

/// One recursion node: the existential part `exists y. psi` it handles.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelLevel {
    pub psi: String,
    /// Recursion depth, 0 at the input formula.
    pub depth: usize,
    pub a: usize,
    pub a_psi: usize,
    /// Number of distinct types over the level's target set.
    pub types: usize,
    pub p_color: String,
    pub q_color: String,
    /// The representatives, as vertices of the input graph.
    pub representatives: Vec<usize>,
}

/// The kernel: `graph` is the subgraph of the input induced by `kept`
/// (vertex `i` of `graph` is `kept[i]`) with fresh colors added, and
/// `formula` is to be evaluated on it.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    pub graph: ColoredGraph,
    pub formula: Formula,
    pub kept: Vec<usize>,
    pub levels: Vec<KernelLevel>,
    /// Length (node count) and quantifier rank of the input formula.
    pub length: usize,
    pub rank: usize,
}

impl Kernel {
    /// Position of an input vertex in the kernel graph.
    pub fn local(&self, v: usize) -> Option<usize> {
        self.kept.binary_search(&v).ok()
    }

    pub fn size(&self) -> usize {
        self.kept.len()
    }

    /// `l^q (1+c)^(((1+eps)^q - 1)/eps) |A|^((1+eps)^q)` with `c` the
    /// largest observed `|A_psi| / |A_level|^(1+eps)`. Infinite for empty
    /// `A` with nonempty representatives.
    pub fn size_shape(&self, a: usize, eps: f64) -> f64 {
        let c = self
            .levels
            .iter()
            .map(|l| l.a_psi as f64 / (l.a as f64).powf(1.0 + eps))
            .fold(0.0, f64::max);
        let q = self.rank as i32;
        let grow = (1.0 + eps).powi(q);
        (self.length as f64).powi(q) * (1.0 + c).powf((grow - 1.0) / eps) * (a as f64).powf(grow)
    }

    pub fn ledger(&self, a: usize) -> serde_json::Value {
        let eps = 0.5;
        let shape = self.size_shape(a, eps);
        serde_json::json!({
            "levels": self.levels,
            "total_size": self.size(),
            "target_size": a,
            "length": self.length,
            "rank": self.rank,
            "shape": { "eps": eps, "value": if shape.is_finite() { serde_json::json!(shape) } else { serde_json::Value::Null } },
        })
    }

    /// The same kernel with input vertex `v` removed from the graph and
    /// from `kept`. Used to check that verification notices damage.
    pub fn without_vertex(&self, v: usize) -> Result<Kernel> {
        let i = self.local(v).ok_or(Error::OutOfRange {
            vertex: v,
            n: self.kept.len(),
        })?;
        let rest: Vec<usize> = (0..self.kept.len()).filter(|&j| j != i).collect();
        let (graph, _) = self.graph.induced(&rest);
        let kept = rest.iter().map(|&j| self.kept[j]).collect();
        Ok(Kernel {
            graph,
            kept,
            ..self.clone()
        })
    }
}

struct Builder<'g> {
    g: &'g ColoredGraph,
    next: usize,
    levels: Vec<KernelLevel>,
}

/// Fresh colors of one recursion node, on input-graph vertices.
type Colors = BTreeMap<String, BTreeSet<usize>>;

impl Builder<'_> {
    fn fresh(&mut self, stem: &str) -> String {
        loop {
            let name = format!("_{stem}{}", self.next);
            if self.g.color(&name).is_none() {
                return name;
            }
            self.next += 1;
        }
    }

    fn build(
        &mut self,
        a: &BTreeSet<usize>,
        phi: &Formula,
        depth: usize,
    ) -> Result<(BTreeSet<usize>, Colors, Formula)> {
        if phi.rank() == 0 {
            return Ok((a.clone(), Colors::new(), phi.clone()));
        }
        let mut vertices = a.clone();
        let mut colors = Colors::new();
        let mut replaced: Vec<((String, Formula), Formula)> = Vec::new();
        for (y, psi) in existential_parts(phi) {
            let classes = type_classes(self.g, &psi, &y, a)?;
            let reps: BTreeSet<usize> = classes.values().copied().collect();
            let p = self.fresh("P");
            let q = self.fresh("Q");
            self.next += 1;
            self.levels.push(KernelLevel {
                psi: psi.to_string(),
                depth,
                a: a.len(),
                a_psi: reps.len(),
                types: classes.len(),
                p_color: p.clone(),
                q_color: q.clone(),
                representatives: reps.iter().copied().collect(),
            });
            let target: BTreeSet<usize> = a.union(&reps).copied().collect();
            let (sub_vertices, sub_colors, sub_phi) = self.build(&target, &psi, depth + 1)?;
            let body = Formula::and(Formula::color(&p, &y), relativize(&sub_phi, &q));
            replaced.push(((y.clone(), psi), Formula::exists(&y, body)));
            vertices.extend(&sub_vertices);
            colors.extend(sub_colors);
            colors.insert(p, reps);
            colors.insert(q, sub_vertices);
        }
        Ok((vertices, colors, substitute(phi, &replaced)))
    }
}

fn substitute(f: &Formula, replaced: &[((String, Formula), Formula)]) -> Formula {
    match f {
        Formula::Not(a) => Formula::not(substitute(a, replaced)),
        Formula::And(a, b) => Formula::and(substitute(a, replaced), substitute(b, replaced)),
        Formula::Or(a, b) => Formula::or(substitute(a, replaced), substitute(b, replaced)),
        Formula::Exists(y, body) => replaced
            .iter()
            .find(|((v, psi), _)| v == y && psi == &**body)
            .map(|(_, out)| out.clone())
            .expect("every existential part has a replacement"),
        _ => f.clone(),
    }
}

/// Kernelizes `phi` for target set `a` by induction on quantifier rank.
pub fn kernelize(g: &ColoredGraph, a: &BTreeSet<usize>, phi: &Formula) -> Result<Kernel> {
    if let Some(&v) = a.iter().find(|&&v| v >= g.n()) {
        return Err(Error::OutOfRange {
            vertex: v,
            n: g.n(),
        });
    }
    let mut b = Builder {
        g,
        next: 0,
        levels: Vec::new(),
    };
    let start = if phi.rank() == 0 {
        phi.clone()
    } else {
        normalize(phi)
    };
    let (vertices, colors, formula) = b.build(a, &start, 0)?;
    let kept: Vec<usize> = vertices.into_iter().collect();
    let (mut graph, _) = g.induced(&kept);
    for (name, class) in colors {
        let local: Vec<usize> = class
            .iter()
            .map(|v| kept.binary_search(v).expect("colored vertices are kept"))
            .collect();
        graph.add_color(&name, local)?;
    }
    Ok(Kernel {
        graph,
        formula,
        kept,
        levels: b.levels,
        length: phi.size(),
        rank: phi.rank(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KernelCheck {
    pub holds: bool,
    pub tuples: usize,
    /// First tuple of `A` (in the sorted free-variable order) on which the
    /// two sides differ, or a vertex of `A` missing from the kernel.
    pub witness: Option<Vec<usize>>,
}

/// Compares `phi` on `g` with the kernel formula on the kernel graph over
/// every tuple from `a`.
pub fn verify_kernel(
    g: &ColoredGraph,
    k: &Kernel,
    a: &BTreeSet<usize>,
    phi: &Formula,
) -> Result<KernelCheck> {
    if let Some(&v) = a.iter().find(|&&v| k.local(v).is_none()) {
        return Ok(KernelCheck {
            holds: false,
            tuples: 0,
            witness: Some(vec![v]),
        });
    }
    let vars: Vec<String> = phi.free_vars().into_iter().collect();
    let extra: Vec<String> = k
        .formula
        .free_vars()
        .into_iter()
        .filter(|v| !vars.contains(v))
        .collect();
    if !extra.is_empty() {
        return Err(Error::Arity(format!(
            "kernel formula has extra free variables {}",
            extra.join(", ")
        )));
    }
    let left = Evaluator::new(g, phi, &vars)?;
    let right = Evaluator::new(&k.graph, &k.formula, &vars)?;
    let pool: Vec<usize> = a.iter().copied().collect();
    let mut tuples = 0;
    let mut witness = None;
    for_each_tuple(pool.len(), vars.len(), |idx| {
        if witness.is_some() {
            return;
        }
        tuples += 1;
        let t: Vec<usize> = idx.iter().map(|&i| pool[i]).collect();
        let local: Vec<usize> = t
            .iter()
            .map(|&v| k.local(v).expect("checked above"))
            .collect();
        if left.eval(&t) != right.eval(&local) {
            witness = Some(t);
        }
    });
    Ok(KernelCheck {
        holds: witness.is_none(),
        tuples,
        witness,
    })
}
