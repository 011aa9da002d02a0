//! Reasoning for standpoint EL: syntax, normalisation, a completion-graph
//! tableau, the standard reasoning tasks and a model-search oracle.

pub mod fresh;
pub mod gen;
pub mod normalize;
pub mod oracle;
pub mod syntax;
pub mod tableau;
pub mod tasks;
pub mod textio;

pub use syntax::{Axiom, Body, Concept, KnowledgeBase, Modality, Mode, Name};
