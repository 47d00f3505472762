//! Purpose-driven ontology evaluation.
//!
//! An ontology's purposes select the levels worth evaluating, and each level
//! admits a set of evaluation methods ([`framework`]). The remaining modules
//! execute the automatable part of each method: criteria-based measures
//! ([`criteria`]), comparison with a gold standard ([`gold`]), corpus fit
//! ([`corpus`]), competency queries over inferred knowledge ([`context`]) and
//! syntax checks ([`syntactic`]). [`report`] ties them into one run.

pub mod context;
pub mod corpus;
pub mod criteria;
pub mod exec;
pub mod framework;
pub mod gold;
pub mod metric;
pub mod rdf;
pub mod report;
pub mod syntactic;
pub mod taxonomy;
pub mod text;

pub use exec::Execution;
pub use metric::{Finding, FindingKind, MetricResult};
