use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at offset {pos}: {message}")]
    Syntax { pos: usize, message: String },

    #[error("unbound variable `{name}` at offset {pos}")]
    Unbound { pos: usize, name: String },

    #[error("predicate `{name}` expects {expected} arguments, got {found}")]
    Arity {
        name: String,
        expected: usize,
        found: usize,
    },

    #[error("empty tree has no rank")]
    EmptyTree,

    #[error("carrier has {available} elements, {requested} requested")]
    InsufficientCarrier { available: usize, requested: usize },

    #[error("tree level must be at least {min}, got {level}")]
    Level { level: usize, min: usize },

    #[error("malformed normal form: {0}")]
    NormalForm(String),

    #[error("invalid enumerator `{id}`: {reason}")]
    Enumerator { id: String, reason: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("trace error: {0}")]
    Trace(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
