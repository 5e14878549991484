use thiserror::Error;

use crate::model::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("cycle detected through node `{0}`")]
    Cycle(String),

    #[error("unknown node `{0}`")]
    UnknownNode(String),

    #[error("node `{node}` has no state `{state}`")]
    UnknownState { node: String, state: String },

    #[error("impossible evidence: P(E) = 0")]
    ImpossibleEvidence,

    #[error("no accepted samples after {drawn} draws")]
    NoAcceptedSamples { drawn: u64 },

    #[error("invalid model:\n{0}")]
    Invalid(ValidationReport),

    #[error("value table is empty")]
    EmptyValueTable,

    #[error("evidence binds `{0}` more than once")]
    DuplicateBinding(String),

    #[error("`{0}` is both the query target and evidence")]
    TargetInEvidence(String),

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{0}")]
    Usage(String),
}

impl Error {
    pub(crate) fn usage(message: impl Into<String>) -> Self {
        Error::Usage(message.into())
    }
}
