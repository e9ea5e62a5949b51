use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the expression, generation, coverage and selection layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty expression")]
    EmptyInput,

    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("not a singular boolean expression: variable `{variable}` occurs more than once")]
    SbeViolation { variable: String },

    #[error("variable set mismatch: expected {{{}}}, found {{{}}}", expected.join(", "), found.join(", "))]
    VariableMismatch {
        expected: Vec<String>,
        found: Vec<String>,
    },

    #[error("exhaustive comparison limited to {max} variables, expression has {n}")]
    TooManyVariables { n: usize, max: usize },

    #[error("unknown condition `{0}`")]
    UnknownCondition(String),

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("invalid option: {0}")]
    InvalidOptions(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid cost model: {0}")]
    InvalidCostModel(String),

    #[error("cannot read {}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed JSON")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
