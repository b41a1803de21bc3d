use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    /// An operation's precondition failed; `clause` names the failed clause.
    #[error("{op}: {clause}")]
    Precondition { op: &'static str, clause: String },
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("size bound exceeded: {what} has {got}, limit is {limit}")]
    SizeBound {
        what: &'static str,
        got: usize,
        limit: usize,
    },
    #[error("axiom violation: {0}")]
    Axiom(String),
    #[error("unknown catalog entry `{0}`")]
    UnknownName(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}

pub(crate) fn pre<T>(op: &'static str, clause: impl Into<String>) -> Result<T> {
    Err(Error::Precondition {
        op,
        clause: clause.into(),
    })
}
