//! Criteria-based measures: consistency (circularity, partition and semantic
//! inconsistency errors), conciseness (redundancy, grammatical redundancy and
//! identical formal definitions), vocabulary completeness, and aggregation of
//! expert scores for criteria that need manual inspection.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::framework::{Level, Method};
use crate::metric::{Finding, FindingKind, MetricResult};
use crate::rdf::{Iri, OntologyGraph, Term, Triple, TripleSet};
use crate::taxonomy::{self, AncestorCache};
use crate::text::normalize_text;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CriteriaError {
    #[error("subclass hierarchy has {} cycle(s); run circularity checks first", .0.len())]
    CyclicGraph(Vec<Vec<Iri>>),
    #[error("expected term list is empty")]
    EmptyReference,
    #[error("invalid expert score record #{index}: {reason}")]
    Validation { index: usize, reason: String },
}

fn ensure_acyclic(g: &OntologyGraph) -> Result<(), CriteriaError> {
    let cycles = taxonomy::cyclic_components(g.classes(), g.subclass_edges());
    if cycles.is_empty() {
        Ok(())
    } else {
        Err(CriteriaError::CyclicGraph(cycles))
    }
}

fn render(iris: &[&Iri]) -> String {
    iris.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(", ")
}

pub fn circularity_errors(g: &OntologyGraph) -> MetricResult {
    let findings = taxonomy::cyclic_components(g.classes(), g.subclass_edges())
        .into_iter()
        .map(|members| {
            let detail = format!("subclass cycle through {}", render(&members.iter().collect::<Vec<_>>()));
            Finding::new(FindingKind::CircularityError, members, detail)
        })
        .collect();
    MetricResult::count("circularity_errors", findings, Level::Hierarchy, "cyclic strongly connected components of the subclass digraph", g.triples().len())
}

/// Entities (classes or instances) falling under both members of a disjoint pair.
pub fn partition_errors(g: &OntologyGraph) -> MetricResult {
    let children = taxonomy::children_map(g);
    let mut below: HashMap<&Iri, BTreeSet<Iri>> = HashMap::new();
    let mut findings = Vec::new();
    for (b, c) in g.disjoint_pairs() {
        for x in [b, c] {
            below.entry(x).or_insert_with(|| taxonomy::descendants_or_self(&children, x));
        }
        let (db, dc) = (&below[b], &below[c]);
        let mut violators: BTreeSet<&Iri> = db.intersection(dc).collect();
        let typed_under = |d: &BTreeSet<Iri>| -> BTreeSet<&Iri> {
            g.type_assertions().iter().filter(|(_, t)| d.contains(t)).map(|(i, _)| i).collect()
        };
        violators.extend(typed_under(db).intersection(&typed_under(dc)).copied());
        for a in violators {
            let mut subjects = vec![a.clone()];
            subjects.extend([b, c].into_iter().filter(|x| *x != a).cloned());
            let detail = format!("{a} falls under disjoint classes {b} and {c}");
            findings.push(Finding::new(FindingKind::PartitionError, subjects, detail));
        }
    }
    MetricResult::count("partition_errors", findings, Level::SemanticRelations, "entities subsumed by or typed under both members of an owl:disjointWith pair", g.triples().len())
}

fn disjoint_closed(g: &OntologyGraph, up: &mut AncestorCache<'_>, a: &Iri, b: &Iri) -> bool {
    let ua = up.up_closure(a).clone();
    let ub = up.up_closure(b);
    ua.iter().any(|x| ub.iter().any(|y| {
        let key = if x <= y { (x.clone(), y.clone()) } else { (y.clone(), x.clone()) };
        g.disjoint_pairs().contains(&key)
    }))
}

/// Triples whose subject (object) has an asserted type disjoint with a
/// declared domain (range) of the predicate. Disjointness is inherited down
/// the subclass hierarchy on both sides. Untyped nodes are never flagged.
pub fn semantic_inconsistency_errors(g: &OntologyGraph) -> MetricResult {
    let mut up = AncestorCache::new(g);
    let mut types: BTreeMap<&Iri, Vec<&Iri>> = BTreeMap::new();
    for (i, t) in g.type_assertions() {
        types.entry(i).or_default().push(t);
    }
    let mut findings = Vec::new();
    let conflict = |node: &Iri, declared: &BTreeSet<Iri>, up: &mut AncestorCache<'_>| -> Option<(Iri, Iri)> {
        let ts = types.get(node)?;
        declared
            .iter()
            .find_map(|d| ts.iter().find(|t| disjoint_closed(g, up, d, t)).map(|t| (d.clone(), (*t).clone())))
    };
    for t in g.triples().iter() {
        let (doms, rans) = (g.domains_of(&t.predicate), g.ranges_of(&t.predicate));
        if doms.is_empty() && rans.is_empty() {
            continue;
        }
        let mut reasons = Vec::new();
        if let Some((d, ty)) = conflict(&t.subject, doms, &mut up) {
            reasons.push(format!("subject typed {ty} conflicts with domain {d}"));
        }
        if let Some(o) = t.object.as_iri() {
            if let Some((r, ty)) = conflict(o, rans, &mut up) {
                reasons.push(format!("object typed {ty} conflicts with range {r}"));
            }
        }
        if !reasons.is_empty() {
            let mut subjects = vec![t.subject.clone(), t.predicate.clone()];
            subjects.extend(t.object.as_iri().cloned());
            findings.push(Finding::new(FindingKind::SemanticInconsistencyError, subjects, format!("{t}: {}", reasons.join("; "))));
        }
    }
    MetricResult::count(
        "semantic_inconsistency_errors",
        findings,
        Level::SemanticRelations,
        "domain/range declarations contradicted by disjointness with asserted types",
        g.triples().len(),
    )
}

/// Subclass edges and type assertions already implied by other assertions.
pub fn redundancy_errors(g: &OntologyGraph) -> Result<MetricResult, CriteriaError> {
    ensure_acyclic(g)?;
    let mut up = AncestorCache::new(g);
    let mut findings = Vec::new();
    for (a, c) in g.subclass_edges() {
        let via = g.parents(a).iter().filter(|b| *b != c).find(|b| up.up_closure(b).contains(c));
        if let Some(b) = via {
            findings.push(Finding::new(
                FindingKind::RedundancyError,
                vec![a.clone(), c.clone()],
                format!("{a} subClassOf {c} is implied via {b}"),
            ));
        }
    }
    let mut types: BTreeMap<&Iri, Vec<&Iri>> = BTreeMap::new();
    for (i, t) in g.type_assertions() {
        types.entry(i).or_default().push(t);
    }
    for (i, ts) in types {
        for t in &ts {
            let via = ts.iter().filter(|o| *o != t).find(|o| up.up_closure(o).contains(*t));
            if let Some(o) = via {
                findings.push(Finding::new(
                    FindingKind::RedundancyError,
                    vec![i.clone(), (*t).clone()],
                    format!("{i} type {t} is implied by its type {o}"),
                ));
            }
        }
    }
    Ok(MetricResult::count(
        "redundancy_errors",
        findings,
        Level::Hierarchy,
        "subclass edges outside the transitive reduction plus type assertions implied by another asserted type",
        g.triples().len(),
    ))
}

/// Triples asserted in more than one source, and entities with two labels in
/// one language that coincide after case-folding and whitespace collapse.
pub fn grammatical_redundancy_errors(sources: &[TripleSet]) -> MetricResult {
    let mut origin: BTreeMap<&Triple, Vec<&str>> = BTreeMap::new();
    for s in sources {
        for t in s.iter() {
            origin.entry(t).or_default().push(&s.source_name);
        }
    }
    let mut findings = Vec::new();
    for (t, names) in &origin {
        if names.len() > 1 {
            let mut subjects = vec![t.subject.clone(), t.predicate.clone()];
            subjects.extend(t.object.as_iri().cloned());
            findings.push(Finding::new(
                FindingKind::GrammaticalRedundancyError,
                subjects,
                format!("{t} asserted in {} sources: {}", names.len(), names.join(", ")),
            ));
        }
    }

    let mut groups: BTreeMap<(&Iri, Option<String>, String), Vec<String>> = BTreeMap::new();
    for t in origin.keys().filter(|t| t.predicate.as_str() == crate::rdf::vocab::RDFS_LABEL) {
        if let Term::Literal(l) = &t.object {
            let lang = l.language().map(str::to_ascii_lowercase);
            groups.entry((&t.subject, lang, normalize_text(l.lexical()))).or_default().push(l.to_string());
        }
    }
    for ((entity, lang, norm), variants) in groups {
        if variants.len() > 1 {
            findings.push(Finding::new(
                FindingKind::GrammaticalRedundancyError,
                vec![entity.clone()],
                format!("labels {} normalize to {norm:?} (language {})", variants.join(", "), lang.as_deref().unwrap_or("none")),
            ));
        }
    }
    let total: usize = origin.len();
    MetricResult::count(
        "grammatical_redundancy_errors",
        findings,
        Level::Lexical,
        "triples repeated across source documents and labels colliding after normalization",
        total,
    )
}

/// Formal signature of a class: direct superclasses, properties whose domain
/// includes it, and its disjointness partners. Annotations are not part of it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ClassSignature {
    pub superclasses: BTreeSet<Iri>,
    pub domain_of: BTreeSet<Iri>,
    pub disjoint_with: BTreeSet<Iri>,
}

impl ClassSignature {
    pub fn is_empty(&self) -> bool {
        self.superclasses.is_empty() && self.domain_of.is_empty() && self.disjoint_with.is_empty()
    }
}

pub fn class_signatures(g: &OntologyGraph) -> BTreeMap<Iri, ClassSignature> {
    let mut sigs: BTreeMap<Iri, ClassSignature> = g.classes().iter().map(|c| (c.clone(), ClassSignature::default())).collect();
    for (c, p) in g.subclass_edges() {
        sigs.entry(c.clone()).or_default().superclasses.insert(p.clone());
    }
    for (prop, ds) in g.domains() {
        for d in ds {
            sigs.entry(d.clone()).or_default().domain_of.insert(prop.clone());
        }
    }
    for (a, b) in g.disjoint_pairs() {
        sigs.entry(a.clone()).or_default().disjoint_with.insert(b.clone());
        sigs.entry(b.clone()).or_default().disjoint_with.insert(a.clone());
    }
    sigs
}

/// Unordered class pairs sharing a non-empty formal signature.
pub fn identical_definitions(g: &OntologyGraph) -> MetricResult {
    let mut by_sig: HashMap<ClassSignature, Vec<Iri>> = HashMap::new();
    for (c, sig) in class_signatures(g) {
        if !sig.is_empty() {
            by_sig.entry(sig).or_default().push(c);
        }
    }
    let mut pairs = Vec::new();
    for members in by_sig.into_values() {
        for (i, a) in members.iter().enumerate() {
            for b in &members[i + 1..] {
                let (x, y) = if a < b { (a, b) } else { (b, a) };
                pairs.push((x.clone(), y.clone()));
            }
        }
    }
    pairs.sort();
    let findings = pairs
        .into_iter()
        .map(|(a, b)| {
            let detail = format!("{a} and {b} have identical superclasses, domain properties and disjointness");
            Finding::new(FindingKind::IdenticalDefinition, vec![a, b], detail)
        })
        .collect();
    MetricResult::count("identical_definitions", findings, Level::SemanticRelations, "class pairs with identical formal signatures", g.triples().len())
}

/// Normalized label strings of every named entity (labels, else local names).
pub fn normalized_labels(g: &OntologyGraph) -> BTreeSet<String> {
    g.named_entities()
        .iter()
        .flat_map(|e| g.display_labels(e))
        .map(|l| normalize_text(&l))
        .filter(|l| !l.is_empty())
        .collect()
}

/// Fraction of expected domain terms matched by some normalized label.
pub fn completeness_coverage(g: &OntologyGraph, expected_terms: &[String]) -> Result<MetricResult, CriteriaError> {
    if expected_terms.is_empty() {
        return Err(CriteriaError::EmptyReference);
    }
    let labels = normalized_labels(g);
    let unmatched: Vec<String> = expected_terms.iter().filter(|t| !labels.contains(&normalize_text(t))).cloned().collect();
    let matched = expected_terms.len() - unmatched.len();
    let value = matched as f64 / expected_terms.len() as f64;
    let notes = unmatched.into_iter().map(|t| format!("unmatched term: {t}")).collect();
    Ok(MetricResult::ratio(
        "completeness_coverage",
        value,
        Level::Lexical,
        Method::CriteriaBased,
        "share of expected domain terms found among normalized labels",
    )
    .with_notes(notes))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Criterion {
    Clarity,
    Coherence,
    Extendibility,
    MinimalEncodingBias,
    MinimalOntologicalCommitment,
    Conciseness,
    Completeness,
    Sensitiveness,
}

impl Criterion {
    /// Level the criterion speaks to.
    pub fn level(self) -> Level {
        match self {
            Criterion::Clarity | Criterion::Coherence | Criterion::MinimalEncodingBias | Criterion::Conciseness | Criterion::Completeness => {
                Level::SemanticRelations
            }
            Criterion::Extendibility | Criterion::MinimalOntologicalCommitment => Level::Context,
            Criterion::Sensitiveness => Level::StructureArchitectureDesign,
        }
    }

    fn slug(self) -> &'static str {
        match self {
            Criterion::Clarity => "clarity",
            Criterion::Coherence => "coherence",
            Criterion::Extendibility => "extendibility",
            Criterion::MinimalEncodingBias => "minimal_encoding_bias",
            Criterion::MinimalOntologicalCommitment => "minimal_ontological_commitment",
            Criterion::Conciseness => "conciseness",
            Criterion::Completeness => "completeness",
            Criterion::Sensitiveness => "sensitiveness",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpertScore {
    pub criterion: Criterion,
    pub score: i64,
    pub assessor: String,
    #[serde(default)]
    pub comment: String,
}

/// Mean score per criterion, in criterion order; comments become notes.
pub fn ingest_expert_scores(scores: &[ExpertScore]) -> Result<Vec<MetricResult>, CriteriaError> {
    for (index, s) in scores.iter().enumerate() {
        if !(1..=5).contains(&s.score) {
            return Err(CriteriaError::Validation { index, reason: format!("score {} outside 1..=5", s.score) });
        }
        if s.assessor.trim().is_empty() {
            return Err(CriteriaError::Validation { index, reason: "assessor is empty".into() });
        }
    }
    let mut grouped: BTreeMap<Criterion, Vec<&ExpertScore>> = BTreeMap::new();
    for s in scores {
        grouped.entry(s.criterion).or_default().push(s);
    }
    Ok(grouped
        .into_iter()
        .map(|(criterion, rows)| {
            let mean = rows.iter().map(|r| r.score as f64).sum::<f64>() / rows.len() as f64;
            let notes = rows.iter().map(|r| format!("{} ({}): {}", r.assessor, r.score, r.comment)).collect();
            MetricResult::ratio(
                &format!("expert_{}", criterion.slug()),
                mean,
                criterion.level(),
                Method::CriteriaBased,
                &format!("mean of {} expert score(s) on a 1-5 scale", rows.len()),
            )
            .with_notes(notes)
        })
        .collect())
}
