use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::pipeline::{LevelStatus, Report};
use crate::framework::{EntryStatus, Level};
use crate::metric::MetricResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RenderFormat {
    Json,
    Markdown,
}

pub fn render_report(r: &Report, format: RenderFormat) -> String {
    match format {
        RenderFormat::Json => {
            let mut s = serde_json::to_string_pretty(r).expect("report serializes");
            s.push('\n');
            s
        }
        RenderFormat::Markdown => markdown(r),
    }
}

pub fn parse_report_json(text: &str) -> Result<Report, serde_json::Error> {
    serde_json::from_str(text)
}

fn cell(s: &str) -> String {
    s.replace('|', "\\|").replace('\n', " ")
}

fn value(m: &MetricResult) -> String {
    if m.value.fract() == 0.0 {
        format!("{}", m.value)
    } else {
        format!("{:.4}", m.value)
    }
}

fn markdown(r: &Report) -> String {
    let mut out = String::new();
    let w = &mut out;
    let _ = writeln!(w, "# Ontology evaluation report\n\n{}\n", r.tool_version);

    let _ = writeln!(w, "## Plan\n\n| Purpose | Level | Importance | Status | Methods | Rationale |\n|---|---|---|---|---|---|");
    for e in &r.plan.entries {
        let methods: Vec<String> = e.methods.iter().map(ToString::to_string).collect();
        let status = match e.status {
            EntryStatus::Selected => "Selected",
            EntryStatus::Excluded => "Excluded",
        };
        let _ = writeln!(w, "| {:?} | {} | {:?} | {} | {} | {} |", e.purpose, e.level, e.importance, status, methods.join(", "), cell(&e.rationale));
    }

    let _ = writeln!(w, "\n## Summary\n\n| Level | Status |\n|---|---|");
    for (level, status) in &r.summary {
        let s = match status {
            LevelStatus::Pass => "Pass".to_string(),
            LevelStatus::Findings => "Findings".to_string(),
            LevelStatus::Skipped { reason } => format!("Skipped ({})", cell(reason)),
        };
        let _ = writeln!(w, "| {level} | {s} |");
    }

    for &level in r.summary.keys() {
        level_section(w, r, level);
    }

    let _ = writeln!(w, "\n## Inputs\n\n| Path | SHA-256 |\n|---|---|");
    for (path, digest) in &r.input_digests {
        let _ = writeln!(w, "| {} | `{digest}` |", cell(path));
    }
    out
}

fn level_section(w: &mut String, r: &Report, level: Level) {
    let _ = writeln!(w, "\n## {}\n", level.title());
    let metrics: Vec<&MetricResult> = r.results.iter().filter(|m| m.level == level).collect();
    if !metrics.is_empty() {
        let _ = writeln!(w, "| Metric | Method | Value | Per 1000 triples | Provenance |\n|---|---|---|---|---|");
        for m in &metrics {
            let density = m.per_1000_triples.map(|d| format!("{d:.3}")).unwrap_or_default();
            let name = if m.degenerate { format!("{} (degenerate)", m.metric_name) } else { m.metric_name.clone() };
            let _ = writeln!(w, "| {} | {} | {} | {} | {} |", cell(&name), m.method, value(m), density, cell(&m.provenance));
        }
        let _ = writeln!(w);
    }

    let findings: Vec<_> = metrics.iter().flat_map(|m| m.findings.iter().map(move |f| (m, f))).collect();
    let syntax_issues: Vec<_> = if level == Level::Syntactic {
        r.syntactic.iter().flat_map(|f| f.report.issues.iter().map(move |i| (&f.path, i))).collect()
    } else {
        Vec::new()
    };
    let failed_tasks: Vec<_> = match (&r.context, level) {
        (Some(c), Level::Context) => c.per_task.iter().filter(|t| !t.passed).collect(),
        _ => Vec::new(),
    };

    if findings.is_empty() && syntax_issues.is_empty() && failed_tasks.is_empty() {
        let _ = writeln!(w, "No findings.");
    }
    if !findings.is_empty() {
        let _ = writeln!(w, "| Metric | Kind | Subjects | Detail |\n|---|---|---|---|");
        for (m, f) in findings {
            let subjects: Vec<String> = f.subjects.iter().map(ToString::to_string).collect();
            let _ = writeln!(w, "| {} | {:?} | {} | {} |", m.metric_name, f.kind, cell(&subjects.join(" ")), cell(&f.detail));
        }
    }
    if !syntax_issues.is_empty() {
        let _ = writeln!(w, "| File | Severity | Code | Subject | Message |\n|---|---|---|---|---|");
        for (path, i) in syntax_issues {
            let subject = i.subject.as_ref().map(ToString::to_string).unwrap_or_default();
            let _ = writeln!(w, "| {} | {:?} | {} | {} | {} |", cell(path), i.severity, i.code, cell(&subject), cell(&i.message));
        }
    }
    if level == Level::Context {
        if let Some(c) = &r.context {
            let _ = writeln!(w, "\n| Task | Inference | Passed | Rows | Reason |\n|---|---|---|---|---|");
            for t in &c.per_task {
                let reason = t.reason.as_deref().unwrap_or("");
                let _ = writeln!(w, "| {} | {} | {} | {} | {} |", cell(&t.task_id), t.require_inference, t.passed, t.actual_bindings.len(), cell(reason));
            }
        }
    }
    let skipped: Vec<_> = r.skipped.iter().filter(|s| s.level == level).collect();
    if !skipped.is_empty() {
        let _ = writeln!(w, "\nSkipped:\n");
        for s in skipped {
            match &s.metric {
                Some(m) => {
                    let _ = writeln!(w, "- {} / {m}: {}", s.method, s.reason);
                }
                None => {
                    let _ = writeln!(w, "- {}: {}", s.method, s.reason);
                }
            }
        }
    }
}
