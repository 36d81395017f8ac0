//! First-order logic over colored graphs: formulas, a small text syntax,
//! evaluation, rank-q types and the interpretation they define.

mod eval;
mod normal;
mod parse;
mod types;

pub use eval::{evaluate, interpret, phi_type, Evaluator};
pub(crate) use eval::{for_each_tuple, pair_evaluator};
pub use normal::{existential_parts, normalize, relativize};
pub use parse::parse_formula;
pub use types::{qtype, qtype_with_budget, TypeId, DEFAULT_TYPE_BUDGET};

use std::collections::BTreeSet;
use std::fmt;

/// Formula AST over the signature `{E, colors}`. Conjunction and disjunction
/// are binary; `->` and `!=` are desugared by the parser.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Edge(String, String),
    Eq(String, String),
    Color(String, String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
}

impl Formula {
    pub fn edge(x: &str, y: &str) -> Self {
        Formula::Edge(x.into(), y.into())
    }

    pub fn eq(x: &str, y: &str) -> Self {
        Formula::Eq(x.into(), y.into())
    }

    pub fn color(name: &str, x: &str) -> Self {
        Formula::Color(name.into(), x.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn exists(y: &str, body: Formula) -> Self {
        Formula::Exists(y.into(), Box::new(body))
    }

    pub fn forall(y: &str, body: Formula) -> Self {
        Formula::Forall(y.into(), Box::new(body))
    }

    /// Free variables in sorted order.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
        let mut var = |v: &'a String, bound: &Vec<&'a str>| {
            if !bound.contains(&v.as_str()) {
                out.insert(v.clone());
            }
        };
        match self {
            Formula::True | Formula::False => {}
            Formula::Edge(a, b) | Formula::Eq(a, b) => {
                var(a, bound);
                var(b, bound);
            }
            Formula::Color(_, a) => var(a, bound),
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Exists(y, f) | Formula::Forall(y, f) => {
                bound.push(y);
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Quantifier rank.
    pub fn rank(&self) -> usize {
        match self {
            Formula::True
            | Formula::False
            | Formula::Edge(..)
            | Formula::Eq(..)
            | Formula::Color(..) => 0,
            Formula::Not(f) => f.rank(),
            Formula::And(a, b) | Formula::Or(a, b) => a.rank().max(b.rank()),
            Formula::Exists(_, f) | Formula::Forall(_, f) => 1 + f.rank(),
        }
    }

    /// Names of all color predicates mentioned.
    pub fn colors(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Color(c, _) = f {
                out.insert(c.clone());
            }
        });
        out
    }

    /// Every variable name occurring anywhere, bound or free.
    pub fn all_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Edge(a, b) | Formula::Eq(a, b) => {
                out.insert(a.clone());
                out.insert(b.clone());
            }
            Formula::Color(_, a) | Formula::Exists(a, _) | Formula::Forall(a, _) => {
                out.insert(a.clone());
            }
            _ => {}
        });
        out
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        let mut k = 0;
        self.visit(&mut |_| k += 1);
        k
    }

    /// Pre-order traversal.
    pub fn visit<F: FnMut(&Formula)>(&self, f: &mut F) {
        f(self);
        match self {
            Formula::Not(a) | Formula::Exists(_, a) | Formula::Forall(_, a) => a.visit(f),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            _ => {}
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Exists(..) | Formula::Forall(..) => 0,
            Formula::Or(..) => 1,
            Formula::And(..) => 2,
            Formula::Not(inner) if !matches!(**inner, Formula::Eq(..)) => 3,
            _ => 4,
        }
    }

    /// `tail` is true when nothing follows this subformula inside the
    /// enclosing parentheses, so a quantifier can print without its own.
    fn write(&self, out: &mut fmt::Formatter<'_>, ctx: u8, tail: bool) -> fmt::Result {
        let prec = self.precedence();
        let paren = prec < ctx && !(prec == 0 && tail);
        let tail = tail || paren;
        if paren {
            out.write_str("(")?;
        }
        match self {
            Formula::True => out.write_str("true")?,
            Formula::False => out.write_str("false")?,
            Formula::Edge(a, b) => write!(out, "E({a},{b})")?,
            Formula::Eq(a, b) => write!(out, "{a}={b}")?,
            Formula::Color(c, a) => write!(out, "{c}({a})")?,
            Formula::Not(inner) => match &**inner {
                Formula::Eq(a, b) => write!(out, "{a}!={b}")?,
                f => {
                    out.write_str("!")?;
                    f.write(out, 3, false)?;
                }
            },
            Formula::And(a, b) => {
                a.write(out, 2, false)?;
                out.write_str(" & ")?;
                b.write(out, 3, tail)?;
            }
            Formula::Or(a, b) => {
                a.write(out, 1, false)?;
                out.write_str(" | ")?;
                b.write(out, 2, tail)?;
            }
            Formula::Exists(y, f) => {
                write!(out, "exists {y}. ")?;
                f.write(out, 0, tail)?;
            }
            Formula::Forall(y, f) => {
                write!(out, "forall {y}. ")?;
                f.write(out, 0, tail)?;
            }
        }
        if paren {
            out.write_str(")")?;
        }
        Ok(())
    }
}

/// Prints in the same syntax [`parse_formula`] accepts, with the minimum
/// parentheses needed to parse back to an identical tree.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 0, true)
    }
}

impl std::str::FromStr for Formula {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_formula(s)
    }
}

/// The distance-at-most-2 formula on distinct vertices.
pub fn distance_two() -> Formula {
    parse_formula("x!=y & (E(x,y) | exists z. E(x,z) & E(z,y))").expect("fixed formula parses")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_vars_and_rank() {
        let f = parse_formula("exists z. E(x,z) & E(z,y)").unwrap();
        assert_eq!(f.rank(), 1);
        assert_eq!(
            f.free_vars().into_iter().collect::<Vec<_>>(),
            vec!["x", "y"]
        );
        let g = parse_formula("E(x,y)").unwrap();
        assert_eq!(g.rank(), 0);
    }

    #[test]
    fn display_round_trips() {
        for text in [
            "E(x,y)",
            "exists z. E(x,z) & E(z,y)",
            "!(exists y. !E(x,y))",
            "x!=y & (E(x,y) | exists z. E(x,z) & E(z,y))",
            "(exists y. red(y)) & x=x",
            "!!true | false",
            "a(x) & (b(x) & c(x))",
            "(a(x) | b(x)) & c(x)",
        ] {
            let f = parse_formula(text).unwrap();
            assert_eq!(f.to_string(), text);
            assert_eq!(parse_formula(&f.to_string()).unwrap(), f);
        }
    }
}
