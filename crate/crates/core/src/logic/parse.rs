//! Recursive-descent parser for the formula syntax.
//!
//! ```text
//! formula := or ("->" or)*          right associative, a -> b is !a | b
//! or      := and ("|" and)*
//! and     := lit ("&" lit)*
//! lit     := "!" lit | ("exists" | "forall") var "." formula
//!          | "(" formula ")" | atom
//! atom    := "E(" var "," var ")" | var "=" var | var "!=" var
//!          | ident "(" var ")" | "true" | "false"
//! ```
//!
//! Quantifier bodies extend as far right as possible. Bound variables that
//! clash with a free variable or an earlier binder are renamed (`z` becomes
//! `z_1`), so the result never shadows.

use std::collections::{BTreeSet, HashMap};

use super::Formula;
use crate::error::{Error, Result};
use crate::graph::is_identifier;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Dot,
    And,
    Or,
    Bang,
    Eq,
    Neq,
    Arrow,
}

fn describe(t: Option<&(usize, Tok)>) -> String {
    match t {
        None => "end of input".into(),
        Some((_, Tok::Ident(s))) => format!("`{s}`"),
        Some((_, t)) => format!("{t:?}"),
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            b'.' => Tok::Dot,
            b'&' => Tok::And,
            b'|' => Tok::Or,
            b'=' => Tok::Eq,
            b'!' if bytes.get(i + 1) == Some(&b'=') => {
                i += 1;
                Tok::Neq
            }
            b'!' => Tok::Bang,
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Arrow
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i + 1 < bytes.len()
                    && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_')
                {
                    i += 1;
                }
                Tok::Ident(text[start..=i].to_string())
            }
            _ => {
                return Err(Error::Syntax {
                    pos: i,
                    msg: format!(
                        "unexpected character `{}`",
                        text[i..].chars().next().unwrap_or('?')
                    ),
                })
            }
        };
        i += 1;
        out.push((start, tok));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

const KEYWORDS: [&str; 4] = ["exists", "forall", "true", "false"];

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn fail<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos(),
            msg: format!("{msg}, found {}", describe(self.toks.get(self.at))),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&tok) {
            self.at += 1;
            Ok(())
        } else {
            self.fail(&format!("expected {what}"))
        }
    }

    fn var(&mut self) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(s)) if !KEYWORDS.contains(&s.as_str()) => {
                let s = s.clone();
                self.at += 1;
                Ok(s)
            }
            _ => self.fail("expected a variable"),
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        let lhs = self.or()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.at += 1;
            let rhs = self.formula()?;
            return Ok(Formula::or(Formula::not(lhs), rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula> {
        let mut f = self.and()?;
        while self.peek() == Some(&Tok::Or) {
            self.at += 1;
            f = Formula::or(f, self.and()?);
        }
        Ok(f)
    }

    fn and(&mut self) -> Result<Formula> {
        let mut f = self.lit()?;
        while self.peek() == Some(&Tok::And) {
            self.at += 1;
            f = Formula::and(f, self.lit()?);
        }
        Ok(f)
    }

    fn lit(&mut self) -> Result<Formula> {
        match self.peek().cloned() {
            Some(Tok::Bang) => {
                self.at += 1;
                Ok(Formula::not(self.lit()?))
            }
            Some(Tok::LParen) => {
                self.at += 1;
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Some(Tok::Ident(word)) if word == "exists" || word == "forall" => {
                self.at += 1;
                let y = self.var()?;
                self.expect(Tok::Dot, "`.` after quantified variable")?;
                let body = Box::new(self.formula()?);
                Ok(if word == "exists" {
                    Formula::Exists(y, body)
                } else {
                    Formula::Forall(y, body)
                })
            }
            Some(Tok::Ident(word)) if word == "true" => {
                self.at += 1;
                Ok(Formula::True)
            }
            Some(Tok::Ident(word)) if word == "false" => {
                self.at += 1;
                Ok(Formula::False)
            }
            Some(Tok::Ident(word)) => {
                self.at += 1;
                match self.peek() {
                    Some(Tok::LParen) => {
                        self.at += 1;
                        let a = self.var()?;
                        if word == "E" && self.peek() == Some(&Tok::Comma) {
                            self.at += 1;
                            let b = self.var()?;
                            self.expect(Tok::RParen, "`)`")?;
                            return Ok(Formula::Edge(a, b));
                        }
                        self.expect(Tok::RParen, "`)`")?;
                        Ok(Formula::Color(word, a))
                    }
                    Some(Tok::Eq) => {
                        self.at += 1;
                        Ok(Formula::Eq(word, self.var()?))
                    }
                    Some(Tok::Neq) => {
                        self.at += 1;
                        Ok(Formula::not(Formula::Eq(word, self.var()?)))
                    }
                    _ => self.fail("expected `(`, `=` or `!=`"),
                }
            }
            _ => self.fail("expected a formula"),
        }
    }
}

pub fn parse_formula(text: &str) -> Result<Formula> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks,
        at: 0,
        end: text.len(),
    };
    let f = p.formula()?;
    if p.at != p.toks.len() {
        return p.fail("unexpected trailing input");
    }
    Ok(alpha_rename(&f))
}

/// Renames binders so that no bound variable shadows a free variable or
/// another binder of the same name.
pub(crate) fn alpha_rename(f: &Formula) -> Formula {
    let mut taken: BTreeSet<String> = f.free_vars();
    let all = f.all_vars();
    let mut scope: HashMap<String, Vec<String>> = HashMap::new();
    rename(f, &mut taken, &all, &mut scope)
}

fn rename(
    f: &Formula,
    taken: &mut BTreeSet<String>,
    all: &BTreeSet<String>,
    scope: &mut HashMap<String, Vec<String>>,
) -> Formula {
    let look = |v: &String, scope: &HashMap<String, Vec<String>>| {
        scope
            .get(v)
            .and_then(|s| s.last())
            .cloned()
            .unwrap_or_else(|| v.clone())
    };
    match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Edge(a, b) => Formula::Edge(look(a, scope), look(b, scope)),
        Formula::Eq(a, b) => Formula::Eq(look(a, scope), look(b, scope)),
        Formula::Color(c, a) => Formula::Color(c.clone(), look(a, scope)),
        Formula::Not(a) => Formula::not(rename(a, taken, all, scope)),
        Formula::And(a, b) => {
            let a = rename(a, taken, all, scope);
            Formula::and(a, rename(b, taken, all, scope))
        }
        Formula::Or(a, b) => {
            let a = rename(a, taken, all, scope);
            Formula::or(a, rename(b, taken, all, scope))
        }
        Formula::Exists(y, body) | Formula::Forall(y, body) => {
            let fresh = if taken.contains(y) {
                (1..)
                    .map(|i| format!("{y}_{i}"))
                    .find(|c| !taken.contains(c) && !all.contains(c))
                    .expect("some suffix is unused")
            } else {
                y.clone()
            };
            debug_assert!(is_identifier(&fresh));
            taken.insert(fresh.clone());
            scope.entry(y.clone()).or_default().push(fresh.clone());
            let body = rename(body, taken, all, scope);
            scope.get_mut(y).expect("binder was pushed").pop();
            if matches!(f, Formula::Exists(..)) {
                Formula::Exists(fresh, Box::new(body))
            } else {
                Formula::Forall(fresh, Box::new(body))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atoms() {
        assert_eq!(parse_formula("E(x,y)").unwrap(), Formula::edge("x", "y"));
        assert_eq!(parse_formula("x = y").unwrap(), Formula::eq("x", "y"));
        assert_eq!(
            parse_formula("x!=y").unwrap(),
            Formula::not(Formula::eq("x", "y"))
        );
        assert_eq!(parse_formula("red(x)").unwrap(), Formula::color("red", "x"));
        assert_eq!(parse_formula("E(x)").unwrap(), Formula::color("E", "x"));
    }

    #[test]
    fn quantifier_scope_extends_right() {
        let f = parse_formula("exists z. E(x,z) & E(z,y)").unwrap();
        assert_eq!(
            f,
            Formula::exists(
                "z",
                Formula::and(Formula::edge("x", "z"), Formula::edge("z", "y"))
            )
        );
    }

    #[test]
    fn implication_is_right_associative() {
        let f = parse_formula("a(x) -> b(x) -> c(x)").unwrap();
        let expected = Formula::or(
            Formula::not(Formula::color("a", "x")),
            Formula::or(
                Formula::not(Formula::color("b", "x")),
                Formula::color("c", "x"),
            ),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn syntax_errors_have_positions() {
        match parse_formula("forall y. E(x,y") {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 15),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_formula("E(x,y) &"),
            Err(Error::Syntax { pos: 8, .. })
        ));
        assert!(matches!(
            parse_formula("x # y"),
            Err(Error::Syntax { pos: 2, .. })
        ));
        assert!(matches!(
            parse_formula("E(x,y) y"),
            Err(Error::Syntax { pos: 7, .. })
        ));
        assert!(parse_formula("exists true. x=x").is_err());
    }

    #[test]
    fn clashing_binders_are_renamed() {
        let f = parse_formula("E(x,y) & exists y. E(x,y)").unwrap();
        assert_eq!(f.to_string(), "E(x,y) & exists y_1. E(x,y_1)");
        let g = parse_formula("(exists z. E(x,z)) & exists z. E(z,x)").unwrap();
        assert_eq!(g.to_string(), "(exists z. E(x,z)) & exists z_1. E(z_1,x)");
        let h = parse_formula("exists z. exists z. E(z,z)").unwrap();
        assert_eq!(h.to_string(), "exists z. exists z_1. E(z_1,z_1)");
        assert_eq!(h.free_vars().len(), 0);
    }
}
