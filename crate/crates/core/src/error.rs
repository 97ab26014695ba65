use thiserror::Error;

use crate::algebra::AxiomReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// The tables do not describe a binary operation on `0..n`.
    #[error("malformed table: {0}")]
    Malformed(String),

    #[error("algebra is not an ai-semiring: {0}")]
    NotAiSemiring(Box<AxiomReport>),

    #[error("operation requires a validated algebra{}", name_suffix(.0))]
    NotValidated(Option<String>),

    #[error("partition is not a congruence: {a} and {b} share a block but {reason}")]
    NotACongruence { a: usize, b: usize, reason: String },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("empty seed set")]
    EmptySeed,

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("algebra file error at line {line}: {msg}")]
    Format { line: usize, msg: String },

    #[error("unbound variable `{0}`")]
    UnboundVariable(String),

    #[error("identity is not of the shape u = u + q: {0}; decompose it first")]
    Shape(String),

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("node budget of {budget} exhausted before the search completed")]
    BudgetExhausted { budget: u64 },

    #[error("order {order} outside supported range {min}..={max}")]
    OrderOutOfRange { order: usize, min: usize, max: usize },

    #[error("unknown name `{0}`")]
    Unknown(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    /// A computation produced something a proven theorem rules out.
    #[error("finding: {0}")]
    Finding(String),
}

fn name_suffix(name: &Option<String>) -> String {
    match name {
        Some(n) => format!(" (`{n}` was not validated)"),
        None => String::new(),
    }
}
