mod support;

use std::path::{Path, PathBuf};

use onteval_core::framework::{default_matrix, Grade, Level, Method};
use onteval_core::report::{parse_report_json, render_report, run_pipeline_with, LevelStatus, RenderFormat, RunConfig};
use onteval_core::{Execution, Finding, FindingKind, MetricResult};
use support::*;

fn fixture() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/pest-control")
}

fn fixture_config() -> RunConfig {
    RunConfig::load(&fixture().join("config.json")).unwrap()
}

#[test]
fn json_round_trip_on_random_reports() {
    for seed in 0..200 {
        let report = random_report(&mut rng(seed));
        let text = render_report(&report, RenderFormat::Json);
        let back = parse_report_json(&text).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
        assert_eq!(back, report, "seed {seed}");
        assert_eq!(render_report(&back, RenderFormat::Json), text);
    }
}

#[test]
fn fixture_run_is_byte_identical_across_runs_and_modes() {
    let cfg = fixture_config();
    let a = render_report(&run_pipeline_with(&cfg, Execution::Parallel).unwrap(), RenderFormat::Json);
    let b = render_report(&run_pipeline_with(&cfg, Execution::Parallel).unwrap(), RenderFormat::Json);
    let c = render_report(&run_pipeline_with(&cfg, Execution::Sequential).unwrap(), RenderFormat::Json);
    assert_eq!(a, b);
    assert_eq!(a, c);
    let md = run_pipeline_with(&cfg, Execution::Parallel).unwrap();
    assert_eq!(render_report(&md, RenderFormat::Markdown), render_report(&md, RenderFormat::Markdown));
}

#[test]
fn fixture_report_shape() {
    let r = run_pipeline_with(&fixture_config(), Execution::default()).unwrap();
    let selected = r.plan.selected_levels();
    assert_eq!(selected, [Level::SemanticRelations, Level::Context, Level::Syntactic].into_iter().collect());
    assert_eq!(r.summary.keys().copied().collect::<std::collections::BTreeSet<_>>(), selected);
    assert!(r.results.iter().any(|m| m.level == Level::SemanticRelations && m.method == Method::CriteriaBased));
    assert!(r.context.is_some());
    assert!(!r.syntactic.is_empty());
    let m = default_matrix();
    for res in &r.results {
        assert_ne!(m.grade(res.method, res.level), Grade::Unsuitable, "{}", res.metric_name);
        assert!(selected.contains(&res.level));
    }
    for f in ["ontology.ttl", "regulation.nt", "rules.json", "suite.json", "expert_scores.json", "expected_terms.txt"] {
        assert!(r.input_digests.contains_key(f), "{f}");
    }
}

#[test]
fn planned_gold_without_path_is_skipped() {
    let mut cfg = fixture_config();
    cfg.resources.gold_standard_available = true;
    cfg.exclusions.clear();
    let r = run_pipeline_with(&cfg, Execution::default()).unwrap();
    let gold: Vec<_> = r.skipped.iter().filter(|s| s.method == Method::GoldStandard).collect();
    assert!(!gold.is_empty());
    assert!(gold.iter().all(|s| s.reason == "no gold standard available"));
    assert!(r.plan.selected_pairs().iter().any(|&(_, m)| m == Method::GoldStandard));
}

#[test]
fn every_selected_level_has_results_or_a_skip_reason() {
    for seed in 0..20 {
        let mut cfg = fixture_config();
        let mut r = rng(seed);
        let report = random_report(&mut r);
        cfg.purposes = report.plan.purposes.clone();
        cfg.resources = report.plan.resource_flags;
        cfg.exclusions.clear();
        let out = run_pipeline_with(&cfg, Execution::default()).unwrap();
        for level in out.plan.selected_levels() {
            let has_result = out.results.iter().any(|m| m.level == level);
            let skipped = matches!(out.summary[&level], LevelStatus::Skipped { ref reason } if !reason.is_empty());
            assert!(has_result || skipped || (level == Level::Context && out.context.is_some()), "seed {seed} {level}");
        }
    }
}

fn report_with(results: Vec<MetricResult>) -> onteval_core::report::Report {
    let mut rep = random_report(&mut rng(1));
    rep.results = results;
    rep.summary = rep.plan.selected_levels().into_iter().map(|l| (l, LevelStatus::Pass)).collect();
    rep.syntactic.clear();
    rep.context = None;
    rep
}

#[test]
fn markdown_reports_no_findings_per_level() {
    let rep = report_with(Vec::new());
    let md = render_report(&rep, RenderFormat::Markdown);
    assert_eq!(md.matches("No findings.").count(), rep.summary.len());
    for level in rep.summary.keys() {
        assert!(md.contains(level.title()));
    }
}

#[test]
fn three_findings_serialize_as_three() {
    let fs = (0..3).map(|i| Finding::new(FindingKind::RedundancyError, vec![node(i)], "x")).collect();
    let rep = report_with(vec![MetricResult::count("redundancy_errors", fs, Level::Lexical, "test", 10)]);
    let v: serde_json::Value = serde_json::from_str(&render_report(&rep, RenderFormat::Json)).unwrap();
    assert_eq!(v["results"][0]["findings"].as_array().unwrap().len(), 3);
}
