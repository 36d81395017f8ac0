//! Line-based graph file format.
//!
//! ```text
//! # comment
//! graph 3
//! edge 0 1
//! edge 1 2
//! color red 0 2
//! ```
//!
//! Writing is canonical: edges in lexicographic order, then one `color` line per
//! class sorted by name with sorted members.

use std::fmt::Write as _;

use super::ColoredGraph;
use crate::error::{Error, Result};

pub fn load_graph(text: &str) -> Result<ColoredGraph> {
    let mut graph: Option<ColoredGraph> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut words = line.split_whitespace();
        let keyword = words.next().unwrap_or_default();
        let err = |msg: String| Error::Parse { line: line_no, msg };
        match (keyword, graph.as_mut()) {
            ("graph", None) => {
                let n = parse_num(words.next(), line_no)?;
                if words.next().is_some() {
                    return Err(err("trailing tokens after vertex count".into()));
                }
                graph = Some(ColoredGraph::new(n));
            }
            ("graph", Some(_)) => return Err(err("duplicate `graph` header".into())),
            (_, None) => return Err(err(format!("expected `graph <n>`, found `{keyword}`"))),
            ("edge", Some(g)) => {
                let u = parse_num(words.next(), line_no)?;
                let v = parse_num(words.next(), line_no)?;
                if words.next().is_some() {
                    return Err(err("edge takes exactly two endpoints".into()));
                }
                g.add_edge(u, v).map_err(|e| match e {
                    Error::OutOfRange { .. } | Error::DuplicateEdge(..) | Error::SelfLoop(_) => e,
                    other => err(other.to_string()),
                })?;
            }
            ("color", Some(g)) => {
                let name = words
                    .next()
                    .ok_or_else(|| err("color needs a name".into()))?;
                if !is_identifier(name) {
                    return Err(err(format!("invalid color name `{name}`")));
                }
                let vertices = words
                    .map(|w| parse_num(Some(w), line_no))
                    .collect::<Result<Vec<_>>>()?;
                g.add_color(name, vertices)?;
            }
            (other, Some(_)) => return Err(err(format!("unknown directive `{other}`"))),
        }
    }
    graph.ok_or(Error::Parse {
        line: 0,
        msg: "missing `graph <n>` header".into(),
    })
}

pub fn write_graph(g: &ColoredGraph) -> String {
    let mut out = format!("graph {}\n", g.n());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "edge {u} {v}");
    }
    for (name, class) in g.colors() {
        out.push_str("color ");
        out.push_str(name);
        for v in class {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
    out
}

fn parse_num(word: Option<&str>, line: usize) -> Result<usize> {
    let word = word.ok_or(Error::Parse {
        line,
        msg: "missing number".into(),
    })?;
    word.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("expected a non-negative integer, found `{word}`"),
    })
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}
