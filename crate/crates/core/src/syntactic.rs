//! Syntactic-level checks: parse errors plus referential hygiene warnings.
//!
//! | code | severity | meaning |
//! |---|---|---|
//! | `ENCODING_ERROR` | Error | input is not UTF-8 |
//! | `PARSE_ERROR` | Error | the parser rejected the document |
//! | `UNDECLARED_CLASS` | Warning | a class is used but never typed `owl:Class`/`rdfs:Class` |
//! | `UNDECLARED_PROPERTY` | Warning | a predicate is used but never typed as a property |
//! | `RELATIVE_IRI` | Warning | an IRI has no scheme |
//! | `MISSING_LABEL` | Warning | a class has no `rdfs:label` |
//! | `DANGLING_REFERENCE` | Warning | a subclass edge points at an IRI that is never described |

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::rdf::vocab::is_meta_term;
use crate::rdf::{build_ontology, Format, Iri, OntologyGraph, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SyntaxIssue {
    pub severity: Severity,
    pub code: String,
    pub subject: Option<Iri>,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub column: Option<usize>,
}

impl SyntaxIssue {
    fn warning(code: &str, subject: &Iri, message: String) -> Self {
        SyntaxIssue { severity: Severity::Warning, code: code.to_string(), subject: Some(subject.clone()), message, line: None, column: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyntacticReport {
    pub parse_ok: bool,
    pub issues: Vec<SyntaxIssue>,
}

impl SyntacticReport {
    pub fn has_errors(&self) -> bool {
        self.issues.iter().any(|i| i.severity == Severity::Error)
    }

    pub fn count(&self, severity: Severity) -> usize {
        self.issues.iter().filter(|i| i.severity == severity).count()
    }
}

pub fn check_syntax_bytes(raw: &[u8], format: Format) -> SyntacticReport {
    match std::str::from_utf8(raw) {
        Ok(text) => check_syntax(text, format),
        Err(e) => SyntacticReport {
            parse_ok: false,
            issues: vec![SyntaxIssue {
                severity: Severity::Error,
                code: "ENCODING_ERROR".into(),
                subject: None,
                message: format!("invalid UTF-8 at byte {}", e.valid_up_to()),
                line: Some(raw[..e.valid_up_to()].iter().filter(|&&b| b == b'\n').count() + 1),
                column: None,
            }],
        },
    }
}

pub fn check_syntax(raw: &str, format: Format) -> SyntacticReport {
    match format.parse(raw) {
        Err(e) => SyntacticReport {
            parse_ok: false,
            issues: vec![SyntaxIssue {
                severity: Severity::Error,
                code: "PARSE_ERROR".into(),
                subject: None,
                message: e.reason.clone(),
                line: Some(e.line),
                column: Some(e.column),
            }],
        },
        Ok(ts) => {
            let g = build_ontology(ts);
            let mut issues = hygiene_warnings(&g);
            issues.sort();
            SyntacticReport { parse_ok: true, issues }
        }
    }
}

fn user_term(i: &Iri) -> bool {
    !i.is_blank() && !is_meta_term(i.as_str())
}

/// Warnings for a parsed graph.
pub fn hygiene_warnings(g: &OntologyGraph) -> Vec<SyntaxIssue> {
    let mut issues = Vec::new();
    for c in g.classes().iter().filter(|c| user_term(c)) {
        if !g.declared_classes().contains(c) {
            issues.push(SyntaxIssue::warning("UNDECLARED_CLASS", c, format!("{c} is used as a class but not declared")));
        }
        if !g.labels().contains_key(c) {
            issues.push(SyntaxIssue::warning("MISSING_LABEL", c, format!("class {c} has no rdfs:label")));
        }
    }
    let used_properties: BTreeSet<&Iri> = g.triples().iter().map(|t| &t.predicate).chain(g.properties()).filter(|p| user_term(p)).collect();
    for p in used_properties {
        if !g.declared_properties().contains(p) {
            issues.push(SyntaxIssue::warning("UNDECLARED_PROPERTY", p, format!("{p} is used as a property but not declared")));
        }
    }
    let mut iris: BTreeSet<&Iri> = BTreeSet::new();
    for t in g.triples().iter() {
        iris.insert(&t.subject);
        iris.insert(&t.predicate);
        match &t.object {
            Term::Iri(i) => {
                iris.insert(i);
            }
            Term::Literal(l) => iris.extend(l.datatype()),
        }
    }
    for i in iris.into_iter().filter(|i| !i.is_blank() && !i.is_absolute()) {
        issues.push(SyntaxIssue::warning("RELATIVE_IRI", i, format!("{i} is a relative IRI")));
    }
    let mut dangling = BTreeSet::new();
    for (child, parent) in g.subclass_edges() {
        if user_term(parent) && !g.is_described(parent) && dangling.insert(parent) {
            issues.push(SyntaxIssue::warning(
                "DANGLING_REFERENCE",
                parent,
                format!("{child} is a subclass of {parent}, which is never described"),
            ));
        }
    }
    issues
}
