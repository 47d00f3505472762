use serde::{Deserialize, Serialize};

use crate::framework::{Level, Method};
use crate::rdf::Iri;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FindingKind {
    CircularityError,
    PartitionError,
    SemanticInconsistencyError,
    RedundancyError,
    GrammaticalRedundancyError,
    IdenticalDefinition,
}

/// One detected defect.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub kind: FindingKind,
    pub subjects: Vec<Iri>,
    pub detail: String,
}

impl Finding {
    pub fn new(kind: FindingKind, subjects: Vec<Iri>, detail: impl Into<String>) -> Self {
        debug_assert!(!subjects.is_empty());
        Finding { kind, subjects, detail: detail.into() }
    }
}

/// One computed measure. Count metrics carry one finding per unit of `value`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricResult {
    pub metric_name: String,
    pub value: f64,
    pub findings: Vec<Finding>,
    pub level: Level,
    pub method: Method,
    pub provenance: String,
    /// Count normalized by the number of triples evaluated.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub per_1000_triples: Option<f64>,
    /// Set when the value is a convention for an empty denominator.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub degenerate: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl MetricResult {
    pub fn count(name: &str, findings: Vec<Finding>, level: Level, provenance: &str, triple_count: usize) -> Self {
        let value = findings.len() as f64;
        let density = if triple_count == 0 { 0.0 } else { value * 1000.0 / triple_count as f64 };
        MetricResult {
            metric_name: name.to_string(),
            value,
            findings,
            level,
            method: Method::CriteriaBased,
            provenance: provenance.to_string(),
            per_1000_triples: Some(density),
            degenerate: false,
            notes: Vec::new(),
        }
    }

    pub fn ratio(name: &str, value: f64, level: Level, method: Method, provenance: &str) -> Self {
        MetricResult {
            metric_name: name.to_string(),
            value,
            findings: Vec::new(),
            level,
            method,
            provenance: provenance.to_string(),
            per_1000_triples: None,
            degenerate: false,
            notes: Vec::new(),
        }
    }

    pub fn at_level(mut self, level: Level) -> Self {
        self.level = level;
        self
    }

    pub fn with_notes(mut self, notes: Vec<String>) -> Self {
        self.notes = notes;
        self
    }

    pub fn degenerate(mut self, flag: bool) -> Self {
        self.degenerate = flag;
        self
    }
}
