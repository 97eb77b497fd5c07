use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("graph has no edges")]
    EmptyEdgeSet,
    #[error("invalid token {0:?}")]
    InvalidToken(String),
    #[error("unknown letter {0:?}")]
    UnknownLetter(String),
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("vertex {vertex} has two out-edges labeled {label}")]
    NotRightResolving { vertex: String, label: String },
    #[error("graph is not trim (vertex {0} is a sink or a source)")]
    NotTrim(String),
    #[error("graph has a sink at vertex {0}")]
    HasSink(String),
    #[error("set is not closed under out-edges: {src} -> {dst}")]
    NotHereditary { src: String, dst: String },
    #[error("letter map is not a bijection on the alphabet: {0}")]
    NotBijection(String),
    #[error("block length must be at least 1")]
    BadBlockLength,
    #[error("{what} exceeds cap {cap}")]
    CapExceeded { what: String, cap: usize },
    #[error("the presented shift is not irreducible")]
    NotIrreducible,
    #[error("vertex {0} is not regular")]
    NotRegular(String),
    #[error("graph is not follower-separated")]
    NotFollowerSeparated,
    #[error("vertex {0} is not in a terminal component of the Krieger cover")]
    NotTerminal(String),
    #[error("point is not in the shift: {0}")]
    NotInShift(String),
    #[error("word {0} is not in the language")]
    NotInLanguage(String),
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("invalid eventually periodic sequence: {0}")]
    InvalidSequence(String),
    #[error("no synchronizing path found within depth {0}")]
    DepthExhausted(usize),
    #[error("component mixes subset cardinalities")]
    MixedMultiplicity,
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub fn cap(what: impl Into<String>, cap: usize) -> Self {
        Error::CapExceeded { what: what.into(), cap }
    }
}
