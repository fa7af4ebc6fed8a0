use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("duplicate identifier `{0}`")]
    Duplicate(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("cannot load `{0}`")]
    Load(String),
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("graph exceeds the size cap ({0} vertices)")]
    TooLarge(usize),
    #[error("not a directed path: {0}")]
    InvalidPath(String),
    #[error("ranges differ: r(p) = {0}, r(q) = {1}")]
    RangeMismatch(String, String),
    #[error("bad element syntax: {0}")]
    Syntax(String),
    #[error("element is not a nonzero idempotent")]
    NotIdempotent,
    #[error("graph is not connected")]
    Disconnected,
    #[error("graph has a cycle")]
    Cyclic,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid congruence pair: {0}")]
    InvalidPair(String),
    #[error("vertex set is not hereditary")]
    NotHereditary,
    #[error("invalid spanning-forest choice: {0}")]
    InvalidChoice(String),
    #[error("vertices `{0}` and `{1}` are not ~-related")]
    NotRelated(String, String),
    #[error("internal check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
