use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A raw edge references a node that is not part of the node list.
    #[error("edge #{edge_index} ({u} -- {v}) references unknown node {missing}")]
    UnknownEndpoint {
        edge_index: usize,
        u: String,
        v: String,
        missing: String,
    },
    #[error("invalid node id: {0}")]
    InvalidNodeId(String),
    #[error("unknown node {0}")]
    UnknownNode(String),
    /// Input violates an operation's precondition.
    #[error("{0}")]
    Domain(String),
    /// The quantity is mathematically undefined for this input (e.g. assortativity of a regular graph).
    #[error("undefined: {0}")]
    Undefined(String),
    #[error("malformed document at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("{record}: missing or invalid field `{field}`")]
    Field { record: String, field: String },
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn undefined(msg: impl Into<String>) -> Self {
        Error::Undefined(msg.into())
    }
}
