//! Exit codes and the JSON-line diagnostics printed on stderr.

use serde_json::{json, Value};
use shrubkit::Error;

pub const EXIT_VERIFY: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_ADEQUACY: u8 = 3;
pub const EXIT_CAP: u8 = 4;

/// A failed run: the process exit code and one JSON object for stderr.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub report: Value,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            report: json!({ "error": "usage", "message": message.into() }),
        }
    }

    /// A check that ran to completion and found a disagreement.
    pub fn verify(what: &str, message: impl Into<String>, witness: Value) -> Self {
        Failure {
            code: EXIT_VERIFY,
            report: json!({ "error": "verify", "check": what, "message": message.into(), "witness": witness }),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let message = e.to_string();
        let (code, kind, extra) = match &e {
            Error::Adequacy { witness } => {
                (EXIT_ADEQUACY, "adequacy", json!({ "witness": witness }))
            }
            Error::TooLarge { what, size, cap } => (
                EXIT_CAP,
                "too-large",
                json!({ "what": what, "size": size, "cap": cap }),
            ),
            Error::Budget(b) => (EXIT_CAP, "budget", json!({ "budget": b })),
            Error::DecodeMismatch(u, v) => {
                (EXIT_VERIFY, "decode-mismatch", json!({ "witness": [u, v] }))
            }
            Error::SeparatorProperty { u, v, node, r } => (
                EXIT_VERIFY,
                "separator",
                json!({ "witness": [u, v], "node": node, "r": r }),
            ),
            Error::WellDefinedness { tuple } => {
                (EXIT_VERIFY, "well-definedness", json!({ "witness": tuple }))
            }
            Error::NoPath { from, to, budget } => (
                EXIT_VERIFY,
                "no-path",
                json!({ "witness": [from, to], "budget": budget }),
            ),
            Error::Invariant(_) => (EXIT_VERIFY, "invariant", json!({})),
            Error::Parse { line, .. } => (EXIT_USAGE, "parse", json!({ "line": line })),
            Error::Syntax { pos, .. } => (EXIT_USAGE, "syntax", json!({ "pos": pos })),
            Error::OutOfRange { vertex, n } => (
                EXIT_USAGE,
                "out-of-range",
                json!({ "vertex": vertex, "n": n }),
            ),
            Error::DuplicateEdge(..)
            | Error::SelfLoop(_)
            | Error::UnboundVariable(_)
            | Error::Arity(_)
            | Error::UnknownStrategy(_)
            | Error::InvalidOrder(_)
            | Error::Structure(_)
            | Error::Json(_) => (EXIT_USAGE, "input", json!({})),
        };
        let mut report = json!({ "error": kind, "message": message });
        if let (Value::Object(r), Value::Object(x)) = (&mut report, extra) {
            r.extend(x);
        }
        Failure { code, report }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: EXIT_USAGE,
            report: json!({ "error": "io", "message": e.to_string() }),
        }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure {
            code: EXIT_USAGE,
            report: json!({ "error": "json", "message": e.to_string() }),
        }
    }
}
