//! Ground truth for testing: the semantics evaluated directly on finite
//! standpoint structures, and a bounded search for such structures.

mod eval;
pub mod sat;
mod search;
mod structure;

use thiserror::Error;

pub use search::{entails_within, search_model, search_model_with, SearchConfig};
pub use structure::{Interpretation, StandpointStructure};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("unknown {kind} `{name}`")]
    UnknownName { kind: &'static str, name: String },
    #[error("model search gave up after {budget} conflicts")]
    BudgetExceeded { budget: u64 },
    #[error("invalid structure: {0}")]
    InvalidStructure(String),
}

impl OracleError {
    pub(crate) fn unknown(kind: &'static str, name: &str) -> Self {
        OracleError::UnknownName { kind, name: name.to_string() }
    }
}
