use std::collections::{BTreeMap, BTreeSet};

use super::Formula;
use crate::error::{Error, Result};
use crate::graph::{ColoredGraph, DirectedGraph};
use crate::par;

/// A formula compiled against one graph: variables become slots and color
/// predicates become membership tables, so evaluation does no lookups.
#[derive(Debug, Clone)]
pub struct Evaluator<'g> {
    g: &'g ColoredGraph,
    root: Node,
    slots: usize,
    inputs: usize,
    colors: Vec<Vec<bool>>,
}

#[derive(Debug, Clone)]
enum Node {
    Const(bool),
    Edge(usize, usize),
    Eq(usize, usize),
    Color(usize, usize),
    Not(Box<Node>),
    And(Box<Node>, Box<Node>),
    Or(Box<Node>, Box<Node>),
    Exists(usize, Box<Node>),
    Forall(usize, Box<Node>),
}

struct Compiler<'a> {
    g: &'a ColoredGraph,
    scope: Vec<(String, usize)>,
    slots: usize,
    color_index: BTreeMap<String, usize>,
    colors: Vec<Vec<bool>>,
}

impl Compiler<'_> {
    fn slot(&self, v: &str) -> Result<usize> {
        self.scope
            .iter()
            .rev()
            .find(|(name, _)| name == v)
            .map(|&(_, s)| s)
            .ok_or_else(|| Error::UnboundVariable(v.to_string()))
    }

    fn color(&mut self, name: &str) -> usize {
        if let Some(&i) = self.color_index.get(name) {
            return i;
        }
        let mut table = vec![false; self.g.n()];
        if let Some(class) = self.g.color(name) {
            for &v in class {
                table[v] = true;
            }
        }
        self.colors.push(table);
        self.color_index
            .insert(name.to_string(), self.colors.len() - 1);
        self.colors.len() - 1
    }

    fn compile(&mut self, f: &Formula) -> Result<Node> {
        Ok(match f {
            Formula::True => Node::Const(true),
            Formula::False => Node::Const(false),
            Formula::Edge(a, b) => Node::Edge(self.slot(a)?, self.slot(b)?),
            Formula::Eq(a, b) => Node::Eq(self.slot(a)?, self.slot(b)?),
            Formula::Color(c, a) => {
                let s = self.slot(a)?;
                Node::Color(self.color(c), s)
            }
            Formula::Not(a) => Node::Not(Box::new(self.compile(a)?)),
            Formula::And(a, b) => Node::And(Box::new(self.compile(a)?), Box::new(self.compile(b)?)),
            Formula::Or(a, b) => Node::Or(Box::new(self.compile(a)?), Box::new(self.compile(b)?)),
            Formula::Exists(y, body) | Formula::Forall(y, body) => {
                let s = self.slots;
                self.slots += 1;
                self.scope.push((y.clone(), s));
                let inner = Box::new(self.compile(body)?);
                self.scope.pop();
                if matches!(f, Formula::Exists(..)) {
                    Node::Exists(s, inner)
                } else {
                    Node::Forall(s, inner)
                }
            }
        })
    }
}

impl<'g> Evaluator<'g> {
    /// Compiles `f`; `vars` fixes the order of the values passed to
    /// [`Evaluator::eval`] and must cover every free variable.
    pub fn new<S: AsRef<str>>(g: &'g ColoredGraph, f: &Formula, vars: &[S]) -> Result<Self> {
        let mut c = Compiler {
            g,
            scope: vars
                .iter()
                .enumerate()
                .map(|(i, v)| (v.as_ref().to_string(), i))
                .collect(),
            slots: vars.len(),
            color_index: BTreeMap::new(),
            colors: Vec::new(),
        };
        let root = c.compile(f)?;
        Ok(Evaluator {
            g,
            root,
            slots: c.slots,
            inputs: vars.len(),
            colors: c.colors,
        })
    }

    /// Truth value under `values`, given in the order of `vars`.
    pub fn eval(&self, values: &[usize]) -> bool {
        assert_eq!(values.len(), self.inputs, "one value per declared variable");
        let mut slots = vec![0; self.slots];
        slots[..values.len()].copy_from_slice(values);
        self.run(&self.root, &mut slots)
    }

    fn run(&self, node: &Node, s: &mut [usize]) -> bool {
        match node {
            Node::Const(b) => *b,
            Node::Edge(a, b) => self.g.has_edge(s[*a], s[*b]),
            Node::Eq(a, b) => s[*a] == s[*b],
            Node::Color(c, a) => self.colors[*c][s[*a]],
            Node::Not(a) => !self.run(a, s),
            Node::And(a, b) => self.run(a, s) && self.run(b, s),
            Node::Or(a, b) => self.run(a, s) || self.run(b, s),
            Node::Exists(y, a) => (0..self.g.n()).any(|v| {
                s[*y] = v;
                self.run(a, s)
            }),
            Node::Forall(y, a) => (0..self.g.n()).all(|v| {
                s[*y] = v;
                self.run(a, s)
            }),
        }
    }
}

/// Evaluates `f` under an assignment of its free variables.
pub fn evaluate(g: &ColoredGraph, f: &Formula, asg: &BTreeMap<String, usize>) -> Result<bool> {
    let vars: Vec<&String> = asg.keys().collect();
    let values: Vec<usize> = asg.values().copied().collect();
    if let Some(&v) = values.iter().find(|&&v| v >= g.n()) {
        return Err(Error::OutOfRange {
            vertex: v,
            n: g.n(),
        });
    }
    Ok(Evaluator::new(g, f, &vars)?.eval(&values))
}

/// The digraph on `V(G)` with an arc `(u, v)`, `u != v`, whenever
/// `G |= f(u, v)`. Free variables must be among `x` (source) and `y`
/// (target).
pub fn interpret(g: &ColoredGraph, f: &Formula) -> Result<DirectedGraph> {
    let ev = pair_evaluator(g, f)?;
    let n = g.n();
    let rows = par::map_range(n, |u| {
        (0..n)
            .filter(|&v| v != u && ev.eval(&[u, v]))
            .collect::<Vec<_>>()
    });
    let mut d = DirectedGraph::new(n);
    for (u, row) in rows.into_iter().enumerate() {
        for v in row {
            d.add_arc(u, v);
        }
    }
    Ok(d)
}

/// Compiles a binary formula with `x`, `y` as its two argument slots.
pub(crate) fn pair_evaluator<'g>(g: &'g ColoredGraph, f: &Formula) -> Result<Evaluator<'g>> {
    let extra: Vec<String> = f
        .free_vars()
        .into_iter()
        .filter(|v| v != "x" && v != "y")
        .collect();
    if !extra.is_empty() {
        return Err(Error::Arity(format!(
            "expected free variables among {{x, y}}, found {}",
            extra.join(", ")
        )));
    }
    Evaluator::new(g, f, &["x", "y"])
}

/// `{ v in A^ys : G |= f(u, v) }`, with `u` assigned to `xs`.
pub fn phi_type<S: AsRef<str>>(
    g: &ColoredGraph,
    f: &Formula,
    xs: &[S],
    u: &[usize],
    ys: &[S],
    a: &BTreeSet<usize>,
) -> Result<BTreeSet<Vec<usize>>> {
    if xs.len() != u.len() {
        return Err(Error::Arity(format!(
            "{} parameter variables but {} values",
            xs.len(),
            u.len()
        )));
    }
    let mut vars: Vec<&str> = xs.iter().map(AsRef::as_ref).collect();
    vars.extend(ys.iter().map(AsRef::as_ref));
    let ev = Evaluator::new(g, f, &vars)?;
    let pool: Vec<usize> = a.iter().copied().collect();
    let mut out = BTreeSet::new();
    let mut values = u.to_vec();
    values.resize(u.len() + ys.len(), 0);
    for_each_tuple(pool.len(), ys.len(), |idx| {
        let tuple: Vec<usize> = idx.iter().map(|&i| pool[i]).collect();
        values[u.len()..].copy_from_slice(&tuple);
        if ev.eval(&values) {
            out.insert(tuple);
        }
    });
    Ok(out)
}

/// Calls `f` on every index tuple in `0..base` of length `len`, in
/// lexicographic order.
pub(crate) fn for_each_tuple<F: FnMut(&[usize])>(base: usize, len: usize, mut f: F) {
    let mut idx = vec![0; len];
    if len > 0 && base == 0 {
        return;
    }
    loop {
        f(&idx);
        let mut k = len;
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < base {
                break;
            }
            idx[k] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula;

    fn asg(pairs: &[(&str, usize)]) -> BTreeMap<String, usize> {
        pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
    }

    #[test]
    fn evaluate_examples() {
        let p3 = ColoredGraph::path(3);
        let e = parse_formula("E(x,y)").unwrap();
        assert!(evaluate(&p3, &e, &asg(&[("x", 0), ("y", 1)])).unwrap());
        let d2 = parse_formula("exists z. E(x,z) & E(z,y)").unwrap();
        assert!(evaluate(&p3, &d2, &asg(&[("x", 0), ("y", 2)])).unwrap());
        let c4 = ColoredGraph::cycle(4);
        let diam = parse_formula("forall y. (E(x,y) | x=y | exists z. E(x,z)&E(z,y))").unwrap();
        assert!(evaluate(&c4, &diam, &asg(&[("x", 0)])).unwrap());
        assert!(!evaluate(&ColoredGraph::path(4), &diam, &asg(&[("x", 0)])).unwrap());
    }

    #[test]
    fn unbound_and_absent_colors() {
        let p3 = ColoredGraph::path(3);
        let e = parse_formula("E(x,y)").unwrap();
        assert!(
            matches!(evaluate(&p3, &e, &asg(&[("x", 0)])), Err(Error::UnboundVariable(v)) if v == "y")
        );
        let c = parse_formula("blue(x)").unwrap();
        assert!(!evaluate(&p3, &c, &asg(&[("x", 0)])).unwrap());
    }

    #[test]
    fn interpret_examples() {
        let p3 = ColoredGraph::path(3);
        let e = parse_formula("E(x,y)").unwrap();
        assert_eq!(interpret(&p3, &e).unwrap(), p3.to_digraph());
        let tri = interpret(&p3, &crate::logic::distance_two()).unwrap();
        assert_eq!(tri, ColoredGraph::complete(3).to_digraph());
        assert!(interpret(&ColoredGraph::new(3), &e)
            .unwrap()
            .arcs
            .is_empty());
        let bad = parse_formula("E(x,z)").unwrap();
        assert!(matches!(interpret(&p3, &bad), Err(Error::Arity(_))));
    }

    #[test]
    fn phi_type_examples() {
        let p3 = ColoredGraph::path(3);
        let e = parse_formula("E(x,y)").unwrap();
        let a: BTreeSet<usize> = [0, 2].into();
        let t = phi_type(&p3, &e, &["x"], &[1], &["y"], &a).unwrap();
        assert_eq!(t, [vec![0], vec![2]].into());
        assert!(phi_type(&p3, &e, &["x"], &[0], &["y"], &a)
            .unwrap()
            .is_empty());
        let c4 = ColoredGraph::cycle(4);
        let d2 = parse_formula("exists z. E(x,z)&E(z,y)").unwrap();
        let all: BTreeSet<usize> = (0..4).collect();
        assert_eq!(
            phi_type(&c4, &d2, &["x"], &[0], &["y"], &all).unwrap(),
            [vec![0], vec![2]].into()
        );
        assert!(matches!(
            phi_type(&p3, &e, &["x"], &[0, 1], &["y"], &a),
            Err(Error::Arity(_))
        ));
    }

    #[test]
    fn tuple_enumeration() {
        let mut seen = Vec::new();
        for_each_tuple(2, 2, |t| seen.push(t.to_vec()));
        assert_eq!(seen, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        let mut count = 0;
        for_each_tuple(5, 0, |_| count += 1);
        assert_eq!(count, 1);
    }
}
