use thiserror::Error;

/// Errors raised by parsing, binding and the verification pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at {line}:{col}: expected {expected}, found {found}")]
    Syntax {
        line: usize,
        col: usize,
        expected: String,
        found: String,
    },
    #[error("semantic error: {0}")]
    Semantic(String),
    #[error("binding error: {0}")]
    Binding(String),
    #[error("sort error: {0}")]
    Sort(String),
    #[error("formula is not of the forall*exists* shape: {0}")]
    NotForallExists(String),
    #[error("capacity exceeded while building the {phase}: more than {limit} {what}")]
    CapacityExceeded {
        phase: &'static str,
        what: &'static str,
        limit: usize,
    },
    #[error("formula is not admissible")]
    NotAdmissible,
    #[error("colors already disagree at the current pointers")]
    AssumptionViolated,
    #[error("invalid refuter script: {0}")]
    ScriptInvalid(String),
    #[error("the verifier does not win from the initial vertex")]
    NotWinning,
    #[error("missing binding for {0}")]
    MissingBinding(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
