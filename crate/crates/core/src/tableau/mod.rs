//! Completion-graph tableau for satisfiability of normal-form knowledge
//! bases.
//!
//! Rules come in four priority classes: local labelling (LL), local content
//! (LC), global non-generating (GN) and global generating (GG). Within a
//! class, pending applications are processed first in, first out; a pending
//! application that is no longer applicable when it is reached is dropped.

mod context;
mod engine;
mod graph;
mod model;

use serde::Serialize;
use thiserror::Error;

pub use context::TagValue;
pub use engine::{init_graph, saturate, saturate_with};
pub use graph::{Clash, CompletionGraph, Elem, QuasiRole, TraceEvent, Var, VarOrigin};
pub use model::{Run, RunEnumeration};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum RuleClass {
    LL,
    LC,
    GN,
    GG,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Rule {
    Sharpen,
    Conj,
    Subsume,
    Box,
    Global,
    Assert,
    Diamond,
    Down,
    RoleFwd,
    RoleBwd,
    ExistsReuse,
    ExistsGen,
}

impl Rule {
    pub const ALL: [Rule; 12] = [
        Rule::Sharpen,
        Rule::Conj,
        Rule::Subsume,
        Rule::Box,
        Rule::Global,
        Rule::Assert,
        Rule::Diamond,
        Rule::Down,
        Rule::RoleFwd,
        Rule::RoleBwd,
        Rule::ExistsReuse,
        Rule::ExistsGen,
    ];

    pub fn class(self) -> RuleClass {
        match self {
            Rule::Sharpen => RuleClass::LL,
            Rule::Conj | Rule::Subsume | Rule::Box | Rule::Global | Rule::Assert | Rule::Diamond => RuleClass::LC,
            Rule::Down | Rule::RoleFwd | Rule::RoleBwd | Rule::ExistsReuse => RuleClass::GN,
            Rule::ExistsGen => RuleClass::GG,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Rule::Sharpen => "R_sharpen",
            Rule::Conj => "R_and",
            Rule::Subsume => "R_sub",
            Rule::Box => "R_box",
            Rule::Global => "R_g",
            Rule::Assert => "R_a",
            Rule::Diamond => "R_diamond",
            Rule::Down => "R_down",
            Rule::RoleFwd => "R_r",
            Rule::RoleBwd => "R_r'",
            Rule::ExistsReuse => "R_exists_reuse",
            Rule::ExistsGen => "R_exists_gen",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepOutcome {
    Applied(Rule),
    Clash(Clash),
    Saturated,
}

#[derive(Debug)]
pub enum Verdict {
    Satisfiable(Box<CompletionGraph>),
    Unsatisfiable { graph: Box<CompletionGraph>, clash: Clash },
}

impl Verdict {
    pub fn is_satisfiable(&self) -> bool {
        matches!(self, Verdict::Satisfiable(_))
    }

    pub fn graph(&self) -> &CompletionGraph {
        match self {
            Verdict::Satisfiable(g) | Verdict::Unsatisfiable { graph: g, .. } => g,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct SaturationOptions {
    pub trace: bool,
    /// Lowers the step limit below the theoretical bound.
    pub max_steps: Option<u64>,
}

impl SaturationOptions {
    /// Reads the step limit from `SEL_MAX_STEPS` when set.
    pub fn from_env() -> Self {
        let max_steps = std::env::var("SEL_MAX_STEPS").ok().and_then(|v| v.trim().parse().ok());
        SaturationOptions { trace: false, max_steps }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TableauError {
    #[error("knowledge base is not in normal form: {0}")]
    NotNormalForm(String),
    #[error("{what} reached {value}, above the bound {bound}")]
    BoundExceeded { what: &'static str, value: u64, bound: u64 },
    #[error("step limit of {0} rule applications reached")]
    StepLimit(u64),
    #[error("run enumeration capped at {0}")]
    Capped(usize),
}
