//! Application-based evaluation: a forward-chaining rule engine, a
//! conjunctive query language, and a competency-question harness.

mod engine;
mod pattern;
mod query;
mod rules;
mod suite;

use thiserror::Error;

pub use pattern::{solve, Bindings, PatternTerm, TripleIndex, TriplePattern};
pub use query::{evaluate_on, evaluate_query, parse_query, GraphPatternQuery, ResultRows};
pub use rules::{
    builtin_rules, chain_rule, materialize_inferences, materialize_triples, parse_rules, Rule, DEFAULT_TRIPLE_CAP,
};
pub use suite::{
    parse_suite, run_competency_suite, run_competency_suite_with, CompetencyTask, ContextReport, SuiteOptions, TaskOutcome,
};

#[derive(Debug, Error)]
pub enum ContextError {
    #[error("rule {name:?} is invalid: {reason}")]
    InvalidRule { name: String, reason: String },
    #[error("more than {cap} triples derived before reaching a fixpoint")]
    FixpointOverflow { cap: usize },
    #[error("query syntax error at line {line}, column {column}: {reason}")]
    QuerySyntax { line: usize, column: usize, reason: String },
    #[error("projected variable ?{0} does not occur in any pattern")]
    UnboundProjection(String),
    #[error("bad binding value {0}")]
    BadBinding(String),
    #[error("duplicate task id {0:?}")]
    DuplicateTaskId(String),
    #[error("rules file: {0}")]
    RulesFile(String),
    #[error("suite file: {0}")]
    SuiteFile(String),
}
