//! Datalog-style forward chaining: conjunctive bodies, one head pattern, no
//! negation. User rules run together with built-in rules for subclass
//! transitivity, type inheritance and owl:sameAs.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::engine;
use super::pattern::{PatternTerm, TriplePattern};
use super::ContextError;
use crate::rdf::vocab::{OWL_SAME_AS, RDFS_SUBCLASS_OF, RDF_TYPE};
use crate::rdf::{build_ontology, OntologyGraph, TripleSet};

pub const DEFAULT_TRIPLE_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RuleRepr", into = "RuleRepr")]
pub struct Rule {
    name: String,
    body: Vec<TriplePattern>,
    head: TriplePattern,
}

#[derive(Serialize, Deserialize)]
struct RuleRepr {
    name: String,
    body: Vec<TriplePattern>,
    head: TriplePattern,
}

impl TryFrom<RuleRepr> for Rule {
    type Error = ContextError;

    fn try_from(r: RuleRepr) -> Result<Self, Self::Error> {
        Rule::new(r.name, r.body, r.head)
    }
}

impl From<Rule> for RuleRepr {
    fn from(r: Rule) -> Self {
        RuleRepr { name: r.name, body: r.body, head: r.head }
    }
}

impl Rule {
    pub fn new(name: impl Into<String>, body: Vec<TriplePattern>, head: TriplePattern) -> Result<Self, ContextError> {
        let name = name.into();
        if body.is_empty() {
            return Err(ContextError::InvalidRule { name, reason: "body is empty".into() });
        }
        let body_vars: BTreeSet<&str> = body.iter().flat_map(TriplePattern::variables).collect();
        if let Some(v) = head.variables().find(|v| !body_vars.contains(v)) {
            return Err(ContextError::InvalidRule { name, reason: format!("head variable ?{v} does not occur in the body") });
        }
        if matches!(&head.subject, PatternTerm::Const(t) if t.as_iri().is_none()) {
            return Err(ContextError::InvalidRule { name, reason: "head subject is a literal".into() });
        }
        if matches!(&head.predicate, PatternTerm::Const(t) if t.as_iri().is_none_or(|i| i.is_blank())) {
            return Err(ContextError::InvalidRule { name, reason: "head predicate must be an IRI".into() });
        }
        Ok(Rule { name, body, head })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn body(&self) -> &[TriplePattern] {
        &self.body
    }

    pub fn head(&self) -> &TriplePattern {
        &self.head
    }
}

pub fn parse_rules(json: &str) -> Result<Vec<Rule>, ContextError> {
    serde_json::from_str(json).map_err(|e| ContextError::RulesFile(e.to_string()))
}

fn pat(s: &str, p: &str, o: &str) -> TriplePattern {
    let term = |x: &str| x.parse::<PatternTerm>().expect("built-in token");
    TriplePattern::new(term(s), term(p), term(o))
}

fn rule(name: &str, body: &[(&str, &str, &str)], head: (&str, &str, &str)) -> Rule {
    Rule::new(name, body.iter().map(|&(s, p, o)| pat(s, p, o)).collect(), pat(head.0, head.1, head.2)).expect("built-in rule")
}

/// Subclass transitivity, type inheritance, and sameAs symmetry,
/// transitivity and statement copying in every position.
pub fn builtin_rules() -> Vec<Rule> {
    let (sub, ty, same) = (RDFS_SUBCLASS_OF, RDF_TYPE, OWL_SAME_AS);
    vec![
        rule("subclass-transitivity", &[("?a", sub, "?b"), ("?b", sub, "?c")], ("?a", sub, "?c")),
        rule("type-inheritance", &[("?i", ty, "?a"), ("?a", sub, "?b")], ("?i", ty, "?b")),
        rule("sameas-symmetry", &[("?x", same, "?y")], ("?y", same, "?x")),
        rule("sameas-transitivity", &[("?x", same, "?y"), ("?y", same, "?z")], ("?x", same, "?z")),
        rule("sameas-subject", &[("?x", same, "?y"), ("?x", "?p", "?o")], ("?y", "?p", "?o")),
        rule("sameas-predicate", &[("?x", same, "?y"), ("?s", "?x", "?o")], ("?s", "?y", "?o")),
        rule("sameas-object", &[("?x", same, "?y"), ("?s", "?p", "?x")], ("?s", "?p", "?y")),
    ]
}

/// Closure of the triple set under the built-in and user rules (semi-naive).
/// Fails when more than `cap` triples would be derived.
pub fn materialize_triples(input: &TripleSet, rules: &[Rule], cap: usize) -> Result<TripleSet, ContextError> {
    let all_rules: Vec<Rule> = builtin_rules().into_iter().chain(rules.iter().cloned()).collect();
    engine::closure(input, &all_rules, cap)
}

pub fn materialize_inferences(g: &OntologyGraph, rules: &[Rule], cap: usize) -> Result<OntologyGraph, ContextError> {
    materialize_triples(g.triples(), rules, cap).map(build_ontology)
}

/// Rule implied by "a pesticide is effective against a pest if a chemical it
/// contains is effective against the pest".
pub fn chain_rule(name: &str, contains: &str, effective_against: &str) -> Rule {
    Rule::new(
        name,
        vec![
            TriplePattern::new(PatternTerm::var("p"), PatternTerm::iri(contains), PatternTerm::var("c")),
            TriplePattern::new(PatternTerm::var("c"), PatternTerm::iri(effective_against), PatternTerm::var("pest")),
        ],
        TriplePattern::new(PatternTerm::var("p"), PatternTerm::iri(effective_against), PatternTerm::var("pest")),
    )
    .expect("well-formed rule")
}
