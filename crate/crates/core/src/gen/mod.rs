//! Corpus construction: bounded-exhaustive and seeded random statements,
//! contexts, and the fault-injection registry.

mod enumerate;
mod mutant;
mod random;

use serde::{Deserialize, Serialize};

use crate::ast::VarName;

pub use enumerate::{count_stmts, enum_contexts, enum_stmts, subsets, StmtEnumerator, SEQ_ARITY_CAP};
pub use mutant::{Behavior, Mutant, UnknownMutant};
pub use random::{random_stmts, RANDOM_SEQ_ARITY_CAP};

/// Budget of the standard corpus, in statements.
pub const STANDARD_BUDGET: usize = 200_000;

/// Atoms and bounds of a corpus.
///
/// The JSON form carries `depth`, `vars`, `consts` and `ctxValues`, plus
/// `seed` when random statements were mixed in.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CorpusSpec {
    #[serde(rename = "depth")]
    pub max_depth: usize,
    pub vars: Vec<VarName>,
    pub consts: Vec<i64>,
    pub ctx_values: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip)]
    pub budget: Option<usize>,
}

impl CorpusSpec {
    /// Depth 3 over `x`, `y`, constants `{0, 1, 3}`, context values `{0, 1}`,
    /// capped at [`STANDARD_BUDGET`] statements.
    pub fn standard() -> Self {
        CorpusSpec {
            max_depth: 3,
            vars: vec![VarName::new("x").unwrap(), VarName::new("y").unwrap()],
            consts: vec![0, 1, 3],
            ctx_values: vec![0, 1],
            seed: None,
            budget: Some(STANDARD_BUDGET),
        }
    }

    pub fn with_depth(mut self, depth: usize) -> Self {
        self.max_depth = depth;
        self
    }

    pub fn unbounded(mut self) -> Self {
        self.budget = None;
        self
    }
}
