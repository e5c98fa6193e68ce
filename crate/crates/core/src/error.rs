use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("elements belong to different groups")]
    GroupMismatch,

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("action matrices do not define a group action: {0}")]
    NotAnAction(String),

    #[error("invalid cover specification: {0}")]
    InvalidCover(String),

    #[error("word has nontrivial monodromy {0}; the cover is not trivial over it")]
    NontrivialMonodromy(String),

    #[error("unknown group element label `{0}`")]
    UnknownLabel(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("torsion {0} found in first homology (builder bug)")]
    Torsion(String),

    #[error("no solution: {0}")]
    Unsolvable(String),

    #[error("did not converge after {tries} attempts: {what}")]
    NoConvergence { what: String, tries: usize },

    #[error("internal invariant failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
