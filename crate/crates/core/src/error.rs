use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by constructions and checks in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    OutOfRange { vertex: usize, n: usize },

    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("unbound free variable `{0}`")]
    UnboundVariable(String),

    #[error("arity mismatch: {0}")]
    Arity(String),

    #[error("unknown order strategy `{0}`")]
    UnknownStrategy(String),

    #[error("invalid vertex order: {0}")]
    InvalidOrder(String),

    /// An exact solver refused an instance above its declared cap.
    #[error("instance too large for {what}: size {size} exceeds cap {cap}")]
    TooLarge {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("type computation exceeded the node budget of {0}")]
    Budget(u64),

    /// The supplied radius/rank do not determine the formula on the separators
    /// used by the construction. The witness holds two pairs `(u, v)` and
    /// `(u2, v2)` that receive identical labels but disagree on the formula.
    #[error("radius/rank inadequate: pairs ({}, {}) and ({}, {}) share labels but disagree", .witness[0], .witness[1], .witness[2], .witness[3])]
    Adequacy { witness: [usize; 4] },

    #[error("no path of length at most {budget} between {from} and {to}")]
    NoPath {
        from: usize,
        to: usize,
        budget: usize,
    },

    #[error("node {tuple:?} produced with two different separators")]
    WellDefinedness { tuple: Vec<usize> },

    #[error("separator of node {node} fails to {r}-separate {u} and {v}")]
    SeparatorProperty {
        u: usize,
        v: usize,
        node: usize,
        r: usize,
    },

    #[error("structure invalid: {0}")]
    Structure(String),

    #[error("decoded graph differs from input at arc ({0}, {1})")]
    DecodeMismatch(usize, usize),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("{0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
