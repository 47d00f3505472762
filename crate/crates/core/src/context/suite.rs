//! Competency-question harness: each task is a query with the rows it must
//! return, evaluated over the raw or the materialized graph.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::pattern::{Bindings, TripleIndex};
use super::query::{evaluate_on, parse_query, GraphPatternQuery};
use super::rules::{materialize_triples, Rule, DEFAULT_TRIPLE_CAP};
use super::ContextError;
use crate::exec::{self, Execution};
use crate::framework::{Level, Method};
use crate::metric::MetricResult;
use crate::rdf::{OntologyGraph, Term};

/// Expected rows map variable names (with or without `?`) to term tokens;
/// prefixed names use the query's PREFIX declarations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompetencyTask {
    pub task_id: String,
    #[serde(default)]
    pub description: String,
    pub query: String,
    pub expected_bindings: Vec<BTreeMap<String, String>>,
    #[serde(default)]
    pub require_inference: bool,
}

pub fn parse_suite(json: &str) -> Result<Vec<CompetencyTask>, ContextError> {
    serde_json::from_str(json).map_err(|e| ContextError::SuiteFile(e.to_string()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskOutcome {
    pub task_id: String,
    pub description: String,
    pub require_inference: bool,
    pub passed: bool,
    pub actual_bindings: Vec<Bindings>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContextReport {
    pub per_task: Vec<TaskOutcome>,
    pub pass_rate: f64,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub degenerate: bool,
}

impl ContextReport {
    pub fn passed(&self) -> usize {
        self.per_task.iter().filter(|t| t.passed).count()
    }

    pub fn metric(&self) -> MetricResult {
        let notes = self
            .per_task
            .iter()
            .filter(|t| !t.passed)
            .map(|t| format!("{} failed: {}", t.task_id, t.reason.as_deref().unwrap_or("unexpected bindings")))
            .collect();
        MetricResult::ratio(
            "competency_pass_rate",
            self.pass_rate,
            Level::Context,
            Method::ApplicationBased,
            &format!("{} of {} competency tasks answered as expected", self.passed(), self.per_task.len()),
        )
        .degenerate(self.degenerate)
        .with_notes(notes)
    }

    /// Zeroes elapsed times so reports are byte-stable.
    pub fn without_timings(mut self) -> Self {
        for t in &mut self.per_task {
            t.elapsed_ms = 0.0;
        }
        self
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SuiteOptions {
    pub triple_cap: usize,
    pub mode: Execution,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { triple_cap: DEFAULT_TRIPLE_CAP, mode: Execution::default() }
    }
}

pub fn run_competency_suite(g: &OntologyGraph, rules: &[Rule], suite: &[CompetencyTask]) -> Result<ContextReport, ContextError> {
    run_competency_suite_with(g, rules, suite, SuiteOptions::default())
}

fn expected_rows(q: &GraphPatternQuery, task: &CompetencyTask) -> Result<BTreeSet<Bindings>, String> {
    let projection: BTreeSet<&str> = q.projected_variables.iter().map(String::as_str).collect();
    let mut rows = BTreeSet::new();
    for raw in &task.expected_bindings {
        let mut row = Bindings::new();
        for (k, v) in raw {
            let name = k.strip_prefix('?').unwrap_or(k);
            let term: Term = q.resolve_token(v).map_err(|e| e.to_string())?;
            row.insert(name.to_string(), term);
        }
        let keys: BTreeSet<&str> = row.keys().map(String::as_str).collect();
        if keys != projection {
            return Err(format!("expected row binds {keys:?} but the query projects {projection:?}"));
        }
        rows.insert(row);
    }
    Ok(rows)
}

/// Tasks run concurrently over shared immutable indexes. Materialization
/// happens once, and only when some task asks for it; if it overflows, those
/// tasks fail and the rest still run.
pub fn run_competency_suite_with(
    g: &OntologyGraph,
    rules: &[Rule],
    suite: &[CompetencyTask],
    opts: SuiteOptions,
) -> Result<ContextReport, ContextError> {
    let mut ids = BTreeSet::new();
    for t in suite {
        if !ids.insert(&t.task_id) {
            return Err(ContextError::DuplicateTaskId(t.task_id.clone()));
        }
    }
    let raw = TripleIndex::new(g.triples().iter());
    let inferred: OnceLock<Result<TripleIndex, String>> = OnceLock::new();
    if suite.iter().any(|t| t.require_inference) {
        let r = materialize_triples(g.triples(), rules, opts.triple_cap).map(|ts| TripleIndex::new(ts.iter())).map_err(|e| e.to_string());
        let _ = inferred.set(r);
    }
    let per_task = exec::map(suite, opts.mode, |task| {
        let start = Instant::now();
        let outcome = |passed: bool, actual: Vec<Bindings>, reason: Option<String>| TaskOutcome {
            task_id: task.task_id.clone(),
            description: task.description.clone(),
            require_inference: task.require_inference,
            passed,
            actual_bindings: actual,
            reason,
            elapsed_ms: start.elapsed().as_secs_f64() * 1000.0,
        };
        let q = match parse_query(&task.query) {
            Ok(q) => q,
            Err(e) => return outcome(false, Vec::new(), Some(format!("query error: {e}"))),
        };
        let expected = match expected_rows(&q, task) {
            Ok(rows) => rows,
            Err(e) => return outcome(false, Vec::new(), Some(format!("bad expected bindings: {e}"))),
        };
        let index = if task.require_inference {
            match inferred.get().expect("materialized when required") {
                Ok(idx) => idx,
                Err(e) => return outcome(false, Vec::new(), Some(format!("materialization failed: {e}"))),
            }
        } else {
            &raw
        };
        let actual = evaluate_on(index, &q);
        let passed = actual == expected;
        let reason = (!passed).then(|| {
            let missing = expected.difference(&actual).count();
            let extra = actual.difference(&expected).count();
            format!("{missing} expected row(s) missing, {extra} unexpected row(s)")
        });
        outcome(passed, actual.into_iter().collect(), reason)
    });
    let n = per_task.len();
    let passed = per_task.iter().filter(|t| t.passed).count();
    Ok(ContextReport { pass_rate: if n == 0 { 1.0 } else { passed as f64 / n as f64 }, degenerate: n == 0, per_task })
}
