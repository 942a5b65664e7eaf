use thiserror::Error;

/// Errors raised by constructors, operations and loaders.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid map table: entry {entry} at position {position} is not below codomain {cod}")]
    MapEntry {
        position: usize,
        entry: usize,
        cod: usize,
    },

    #[error("cannot compose {left_dom}->{left_cod} with {right_dom}->{right_cod}")]
    Composable {
        left_dom: usize,
        left_cod: usize,
        right_dom: usize,
        right_cod: usize,
    },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("index {index} out of range for arity {arity}")]
    Index { index: usize, arity: usize },

    #[error("stage {stage} exceeds available bound {bound}")]
    Range { stage: usize, bound: usize },

    #[error("term {term} is not well formed in a context of {context} variables")]
    Context { term: String, context: usize },

    #[error("operator `{0}` is not in the signature")]
    UnknownOperator(String),

    #[error("operator `{op}` expects {expected} arguments, got {found}")]
    Arity {
        op: String,
        expected: usize,
        found: usize,
    },

    #[error("unknown built-in clone `{0}`")]
    UnknownBuiltin(String),

    #[error("element is not in carrier {stage}: {detail}")]
    NotInCarrier { stage: usize, detail: String },

    #[error("carrier {stage} is empty, no element can be produced")]
    EmptyCarrier { stage: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("certification failed: {0}")]
    Certification(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
