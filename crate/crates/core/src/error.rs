use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid word: {0}")]
    InvalidWord(String),

    #[error("arity mismatch: expected {expected}, found {found}")]
    Arity { expected: usize, found: usize },

    #[error("track mapping: {0}")]
    TrackMap(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// A determinized subset holds accepting states with different outputs.
    #[error("ambiguous outputs {first} and {second} in subset {subset:?}")]
    Ambiguous {
        subset: Vec<u32>,
        first: u32,
        second: u32,
    },

    /// A DFAO run left the transition table.
    #[error("no transition at position {position}")]
    InvalidInput { position: usize },

    #[error("morphism is not prolongable on its start letter")]
    NotProlongable,

    #[error("malformed automaton: {0}")]
    Malformed(String),
}
