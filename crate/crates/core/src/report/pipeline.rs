use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::config::RunConfig;
use super::ReportError;
use crate::context::{self, CompetencyTask, ContextReport, Rule, SuiteOptions};
use crate::corpus::{self, Corpus};
use crate::criteria::{self, ExpertScore};
use crate::exec::{self, Execution};
use crate::framework::{build_plan_with, default_matrix, EvaluationPlan, Grade, Level, MatrixCell, Method, PlanOptions};
use crate::gold::{self, Alignment};
use crate::metric::MetricResult;
use crate::rdf::{build_ontology, Format, OntologyGraph, TripleSet};
use crate::syntactic::{check_syntax_bytes, hygiene_warnings, Severity, SyntacticReport};

pub const TOOL_VERSION: &str = concat!("onteval ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileSyntax {
    pub path: String,
    pub report: SyntacticReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum LevelStatus {
    Pass,
    Findings,
    Skipped { reason: String },
}

/// A planned (level, method) pair, or one metric within it, that did not run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Skipped {
    pub level: Level,
    pub method: Method,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<String>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool_version: String,
    pub plan: EvaluationPlan,
    pub results: Vec<MetricResult>,
    pub syntactic: Vec<FileSyntax>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub context: Option<ContextReport>,
    pub summary: BTreeMap<Level, LevelStatus>,
    pub skipped: Vec<Skipped>,
    pub input_digests: BTreeMap<String, String>,
}

impl Report {
    pub fn has_syntax_errors(&self) -> bool {
        self.syntactic.iter().any(|f| f.report.has_errors())
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Everything a run reads, loaded and parsed before any evaluation starts.
struct Inputs {
    ontologies: Vec<(String, Format, Vec<u8>)>,
    gold: Option<OntologyGraph>,
    corpus: Option<Corpus>,
    rules: Vec<Rule>,
    suite: Option<Vec<CompetencyTask>>,
    expert: Option<Vec<ExpertScore>>,
    expected_terms: Option<Vec<String>>,
    plan_options: PlanOptions,
    digests: BTreeMap<String, String>,
}

struct Reader<'a> {
    cfg: &'a RunConfig,
    digests: BTreeMap<String, String>,
}

impl Reader<'_> {
    fn bytes(&mut self, p: &Path) -> Result<Vec<u8>, ReportError> {
        let full = self.cfg.resolve(p);
        let bytes = std::fs::read(&full).map_err(|e| ReportError::io(&full, e))?;
        self.digests.insert(p.display().to_string(), sha256_hex(&bytes));
        Ok(bytes)
    }

    fn text(&mut self, p: &Path) -> Result<String, ReportError> {
        let bytes = self.bytes(p)?;
        String::from_utf8(bytes).map_err(|_| ReportError::Config(format!("{} is not valid UTF-8", p.display())))
    }

    fn json<T: serde::de::DeserializeOwned>(&mut self, p: &Path) -> Result<T, ReportError> {
        let text = self.text(p)?;
        serde_json::from_str(&text).map_err(|e| ReportError::Config(format!("{}: {e}", p.display())))
    }

    fn corpus_docs(&mut self, dir: &Path) -> Result<Vec<(String, String)>, ReportError> {
        let full = self.cfg.resolve(dir);
        let entries = std::fs::read_dir(&full).map_err(|e| ReportError::io(&full, e))?;
        let mut names = Vec::new();
        for entry in entries {
            let path = entry.map_err(|e| ReportError::io(&full, e))?.path();
            if path.is_file() && path.extension().is_some_and(|e| e == "txt") {
                names.push(path.file_name().expect("file has a name").to_string_lossy().into_owned());
            }
        }
        names.sort();
        names.into_iter().map(|n| Ok((n.clone(), self.text(&dir.join(&n))?))).collect()
    }
}

fn load_inputs(cfg: &RunConfig, mode: Execution) -> Result<Inputs, ReportError> {
    let mut r = Reader { cfg, digests: BTreeMap::new() };
    let mut ontologies = Vec::new();
    for src in &cfg.ontologies {
        ontologies.push((src.path.display().to_string(), src.format(), r.bytes(&src.path)?));
    }
    let gold = match &cfg.gold_path {
        Some(p) => {
            let text = r.text(p)?;
            let ts = Format::from_path(p)
                .parse(&text)
                .map_err(|e| ReportError::Config(format!("gold standard {}: {e}", p.display())))?;
            Some(build_ontology(ts))
        }
        None => None,
    };
    let corpus = match &cfg.corpus_dir {
        Some(d) => {
            let docs = r.corpus_docs(d)?;
            Some(corpus::ingest_corpus_with(&docs, mode).map_err(|e| ReportError::Config(e.to_string()))?)
        }
        None => None,
    };
    let rules = match &cfg.rules_path {
        Some(p) => r.json(p)?,
        None => Vec::new(),
    };
    let suite = cfg.suite_path.as_deref().map(|p| r.json(p)).transpose()?;
    let expert = cfg.expert_scores_path.as_deref().map(|p| r.json(p)).transpose()?;
    let expected_terms = match &cfg.expected_terms_path {
        Some(p) => Some(r.text(p)?.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).map(str::to_string).collect()),
        None => None,
    };
    let mut matrix = default_matrix();
    if let Some(p) = &cfg.matrix_overlay {
        let cells: Vec<MatrixCell> = r.json(p)?;
        matrix = matrix.with_overlay(&cells, p.display().to_string()).map_err(|e| ReportError::Config(e.to_string()))?;
    }
    Ok(Inputs {
        ontologies,
        gold,
        corpus,
        rules,
        suite,
        expert,
        expected_terms,
        plan_options: PlanOptions { matrix, include_structure_level: cfg.include_structure_level },
        digests: r.digests,
    })
}

/// What one (level, method) pair produced.
#[derive(Default)]
struct Outcome {
    results: Vec<MetricResult>,
    skipped: Vec<(Option<String>, String)>,
    context: Option<ContextReport>,
}

impl Outcome {
    fn skip(reason: impl Into<String>) -> Self {
        Outcome { skipped: vec![(None, reason.into())], ..Default::default() }
    }

    fn skip_metric(&mut self, metric: &str, reason: impl Into<String>) {
        self.skipped.push((Some(metric.to_string()), reason.into()));
    }

    fn ran(&self) -> bool {
        !self.results.is_empty() || self.context.is_some()
    }
}

struct Shared<'a> {
    cfg: &'a RunConfig,
    inputs: &'a Inputs,
    graph: &'a OntologyGraph,
    sources: &'a [TripleSet],
    syntactic: &'a [FileSyntax],
    selected: BTreeSet<Level>,
    alignment: Option<Alignment>,
    mode: Execution,
}

fn expert_for(s: &Shared, level: Level, out: &mut Outcome) {
    match &s.inputs.expert {
        None => out.skip_metric("expert scores", "no expert scores supplied"),
        Some(scores) => {
            let here: Vec<ExpertScore> = scores.iter().filter(|e| e.criterion.level() == level).cloned().collect();
            if here.is_empty() {
                out.skip_metric("expert scores", format!("no expert scores for {level} criteria"));
            } else {
                match criteria::ingest_expert_scores(&here) {
                    Ok(rs) => out.results.extend(rs),
                    Err(e) => out.skip_metric("expert scores", e.to_string()),
                }
            }
        }
    }
}

fn completeness(s: &Shared, level: Level, out: &mut Outcome) {
    match &s.inputs.expected_terms {
        None => out.skip_metric("completeness_coverage", "no expected term list supplied"),
        Some(terms) => match criteria::completeness_coverage(s.graph, terms) {
            Ok(r) => out.results.push(r.at_level(level)),
            Err(e) => out.skip_metric("completeness_coverage", e.to_string()),
        },
    }
}

fn criteria_based(s: &Shared, level: Level) -> Outcome {
    let g = s.graph;
    let mut out = Outcome::default();
    match level {
        Level::Lexical => {
            completeness(s, level, &mut out);
            if !s.selected.contains(&Level::SemanticRelations) {
                out.results.push(criteria::grammatical_redundancy_errors(s.sources).at_level(level));
            }
        }
        Level::Hierarchy => {
            out.results.push(criteria::circularity_errors(g));
            match criteria::redundancy_errors(g) {
                Ok(r) => out.results.push(r),
                Err(e) => out.skip_metric("redundancy_errors", e.to_string()),
            }
        }
        Level::SemanticRelations => {
            out.results.push(criteria::partition_errors(g));
            out.results.push(criteria::semantic_inconsistency_errors(g));
            out.results.push(criteria::identical_definitions(g));
            out.results.push(criteria::grammatical_redundancy_errors(s.sources).at_level(level));
            if !s.selected.contains(&Level::Lexical) {
                completeness(s, level, &mut out);
            }
            expert_for(s, level, &mut out);
        }
        Level::Context | Level::StructureArchitectureDesign => expert_for(s, level, &mut out),
        Level::Syntactic => {
            let count = |sev: Severity| s.syntactic.iter().map(|f| f.report.count(sev)).sum::<usize>();
            let lines = |sev: Severity| -> Vec<String> {
                s.syntactic
                    .iter()
                    .flat_map(|f| {
                        f.report.issues.iter().filter(move |i| i.severity == sev).map(move |i| format!("{}: {} {}", f.path, i.code, i.message))
                    })
                    .collect()
            };
            out.results.push(
                MetricResult::ratio("syntax_errors", count(Severity::Error) as f64, level, Method::CriteriaBased, "parse and encoding errors")
                    .with_notes(lines(Severity::Error)),
            );
            out.results.push(
                MetricResult::ratio("syntax_warnings", count(Severity::Warning) as f64, level, Method::CriteriaBased, "referential hygiene warnings")
                    .with_notes(lines(Severity::Warning)),
            );
        }
    }
    out
}

fn gold_standard(s: &Shared, level: Level) -> Outcome {
    let (Some(gold), Some(alignment)) = (&s.inputs.gold, &s.alignment) else {
        return Outcome::skip("no gold standard available");
    };
    match level {
        Level::Lexical => {
            let cn = alignment.pairs.len() + alignment.unmatched_candidate.len();
            let gn = alignment.pairs.len() + alignment.unmatched_gold.len();
            Outcome { results: gold::lexical_precision_recall(alignment, cn, gn).into(), ..Default::default() }
        }
        Level::Hierarchy => match gold::taxonomic_overlap(s.graph, gold, alignment) {
            Ok(r) => Outcome { results: vec![r], ..Default::default() },
            Err(e) => Outcome::skip(e.to_string()),
        },
        _ => Outcome::skip(format!("no automated gold-standard measure at the {level} level")),
    }
}

fn application_based(s: &Shared, level: Level) -> Outcome {
    if level != Level::Context {
        return Outcome::skip("competency tasks are evaluated at the Context level");
    }
    let Some(suite) = &s.inputs.suite else {
        return Outcome::skip("no competency suite supplied");
    };
    let opts = SuiteOptions { triple_cap: s.cfg.thresholds.triple_cap, mode: s.mode };
    match context::run_competency_suite_with(s.graph, &s.inputs.rules, suite, opts) {
        Ok(mut report) => {
            if !s.cfg.record_timings {
                report = report.without_timings();
            }
            Outcome { results: vec![report.metric()], context: Some(report), ..Default::default() }
        }
        Err(e) => Outcome::skip(e.to_string()),
    }
}

fn data_driven(s: &Shared, level: Level) -> Outcome {
    let Some(c) = &s.inputs.corpus else {
        return Outcome::skip("no corpus available");
    };
    let t = &s.cfg.thresholds;
    match level {
        Level::Lexical => match corpus::lexical_coverage(s.graph, c, t.term_k) {
            Ok(rs) => Outcome { results: rs.into(), ..Default::default() },
            Err(e) => Outcome::skip(e.to_string()),
        },
        Level::Hierarchy => match corpus::structural_fit(s.graph, c, t.window) {
            Ok(r) => Outcome { results: vec![r], ..Default::default() },
            Err(e) => Outcome::skip(e.to_string()),
        },
        _ => Outcome::skip(format!("no automated data-driven measure at the {level} level")),
    }
}

fn dispatch(s: &Shared, level: Level, method: Method) -> Outcome {
    if level != Level::Syntactic && s.syntactic.iter().any(|f| !f.report.parse_ok) {
        return Outcome::skip("an input ontology did not parse");
    }
    match method {
        Method::CriteriaBased => criteria_based(s, level),
        Method::GoldStandard => gold_standard(s, level),
        Method::ApplicationBased => application_based(s, level),
        Method::DataDriven => data_driven(s, level),
    }
}

pub fn run_pipeline(cfg: &RunConfig) -> Result<Report, ReportError> {
    run_pipeline_with(cfg, Execution::default())
}

/// Plans, then runs every selected (level, method) pair concurrently over the
/// merged ontology. All inputs are read and validated before evaluation starts.
pub fn run_pipeline_with(cfg: &RunConfig, mode: Execution) -> Result<Report, ReportError> {
    cfg.validate()?;
    let inputs = load_inputs(cfg, mode)?;
    let plan = build_plan_with(&cfg.purposes, cfg.resources, &cfg.exclusions, &inputs.plan_options)
        .map_err(|e| ReportError::Config(e.to_string()))?;

    let mut syntactic: Vec<FileSyntax> = exec::map(&inputs.ontologies, mode, |(path, format, bytes)| FileSyntax {
        path: path.clone(),
        report: check_syntax_bytes(bytes, *format),
    });
    let sources: Vec<TripleSet> = inputs
        .ontologies
        .iter()
        .filter_map(|(path, format, bytes)| {
            let text = std::str::from_utf8(bytes).ok()?;
            format.parse(text).ok().map(|ts| ts.with_name(path.clone()))
        })
        .collect();
    let merged = TripleSet::merge(&sources);
    let merged_name = merged.source_name.clone();
    let graph = build_ontology(merged);
    // With several files, references may cross file boundaries, so hygiene is
    // judged on the merged graph and per-file entries keep only parse errors.
    if syntactic.len() > 1 {
        for f in &mut syntactic {
            f.report.issues.retain(|i| i.severity == Severity::Error);
        }
        if sources.len() == syntactic.len() {
            let mut issues = hygiene_warnings(&graph);
            issues.sort();
            syntactic.push(FileSyntax { path: format!("merged: {merged_name}"), report: SyntacticReport { parse_ok: true, issues } });
        }
    }

    let pairs: Vec<(Level, Method)> = plan
        .selected_pairs()
        .into_iter()
        .filter(|&(l, m)| inputs.plan_options.matrix.grade(m, l) != Grade::Unsuitable)
        .collect();
    let alignment = match &inputs.gold {
        Some(gold) if pairs.iter().any(|&(_, m)| m == Method::GoldStandard) => {
            Some(gold::align_lexicon_with(&graph, gold, cfg.thresholds.similarity, mode))
        }
        _ => None,
    };
    let shared = Shared {
        cfg,
        inputs: &inputs,
        graph: &graph,
        sources: &sources,
        syntactic: &syntactic,
        selected: plan.selected_levels(),
        alignment,
        mode,
    };
    let outcomes = exec::map(&pairs, mode, |&(l, m)| dispatch(&shared, l, m));

    let mut results = Vec::new();
    let mut skipped = Vec::new();
    let mut context = None;
    let mut per_level: BTreeMap<Level, (bool, bool, Vec<String>)> = BTreeMap::new();
    for (&(level, method), out) in pairs.iter().zip(outcomes) {
        let entry = per_level.entry(level).or_default();
        entry.0 |= out.ran();
        entry.1 |= out.results.iter().any(|r| !r.findings.is_empty());
        if let Some(c) = &out.context {
            entry.1 |= c.passed() < c.per_task.len();
        }
        for (metric, reason) in out.skipped {
            if metric.is_none() {
                entry.2.push(format!("{method}: {reason}"));
            }
            skipped.push(Skipped { level, method, metric, reason });
        }
        results.extend(out.results);
        if out.context.is_some() {
            context = out.context;
        }
    }
    let mut summary = BTreeMap::new();
    for level in plan.selected_levels() {
        let (ran, findings, reasons) = per_level.remove(&level).unwrap_or_default();
        let findings = findings || (level == Level::Syntactic && syntactic.iter().any(|f| !f.report.issues.is_empty()));
        let status = if !ran {
            let reason = if reasons.is_empty() { "no method ran".to_string() } else { reasons.join("; ") };
            LevelStatus::Skipped { reason }
        } else if findings {
            LevelStatus::Findings
        } else {
            LevelStatus::Pass
        };
        summary.insert(level, status);
    }

    Ok(Report {
        tool_version: TOOL_VERSION.to_string(),
        plan,
        results,
        syntactic,
        context,
        summary,
        skipped,
        input_digests: inputs.digests,
    })
}
