use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::term::{Iri, Literal, Term, TripleSet};
use super::vocab::*;

/// Inconsistent use of a term, collected during indexing.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("{0} is used both as a literal datatype and as a class")]
    DatatypeUsedAsClass(Iri),
}

fn ordered(a: &Iri, b: &Iri) -> (Iri, Iri) {
    if a <= b {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    }
}

/// Indexed, immutable view over a triple set.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OntologyGraph {
    triples: TripleSet,
    classes: BTreeSet<Iri>,
    properties: BTreeSet<Iri>,
    instances: BTreeSet<Iri>,
    subclass_edges: BTreeSet<(Iri, Iri)>,
    disjoint_pairs: BTreeSet<(Iri, Iri)>,
    equivalent_pairs: BTreeSet<(Iri, Iri)>,
    same_as_pairs: BTreeSet<(Iri, Iri)>,
    labels: BTreeMap<Iri, BTreeSet<Literal>>,
    domains: BTreeMap<Iri, BTreeSet<Iri>>,
    ranges: BTreeMap<Iri, BTreeSet<Iri>>,
    type_assertions: BTreeSet<(Iri, Iri)>,
    namespaces: BTreeSet<String>,
    declared_classes: BTreeSet<Iri>,
    declared_properties: BTreeSet<Iri>,
    parents: BTreeMap<Iri, BTreeSet<Iri>>,
    model_issues: Vec<ModelError>,
}

/// Indexes a triple set.
///
/// Classes are entities typed `owl:Class`/`rdfs:Class`, endpoints of
/// `rdfs:subClassOf`, `owl:disjointWith` and `owl:equivalentClass`, objects of
/// `rdf:type` outside the RDF/RDFS/OWL/XSD vocabularies, and objects of
/// `rdfs:domain`/`rdfs:range`. Instances are subjects of `rdf:type` whose
/// object is such a class.
pub fn build_ontology(ts: TripleSet) -> OntologyGraph {
    let mut g = OntologyGraph::default();
    let mut datatypes = BTreeSet::new();

    for t in ts.iter() {
        for iri in std::iter::once(&t.subject).chain(Some(&t.predicate)).chain(t.object.as_iri()) {
            if let Some(ns) = iri.namespace() {
                g.namespaces.insert(ns.to_string());
            }
        }
        if let Some(dt) = t.object.as_literal().and_then(Literal::datatype) {
            datatypes.insert(dt.clone());
        }
        let p = t.predicate.as_str();
        match (&t.object, p) {
            (Term::Iri(o), RDF_TYPE) => {
                if CLASS_DECLARATIONS.contains(&o.as_str()) {
                    g.declared_classes.insert(t.subject.clone());
                    g.classes.insert(t.subject.clone());
                } else if PROPERTY_DECLARATIONS.contains(&o.as_str()) {
                    g.declared_properties.insert(t.subject.clone());
                    g.properties.insert(t.subject.clone());
                } else if !is_meta_term(o.as_str()) {
                    g.classes.insert(o.clone());
                    g.instances.insert(t.subject.clone());
                    g.type_assertions.insert((t.subject.clone(), o.clone()));
                }
            }
            (Term::Iri(o), RDFS_SUBCLASS_OF) => {
                g.classes.insert(t.subject.clone());
                g.classes.insert(o.clone());
                g.subclass_edges.insert((t.subject.clone(), o.clone()));
                g.parents.entry(t.subject.clone()).or_default().insert(o.clone());
            }
            (Term::Iri(o), OWL_DISJOINT_WITH) => {
                g.classes.insert(t.subject.clone());
                g.classes.insert(o.clone());
                if &t.subject != o {
                    g.disjoint_pairs.insert(ordered(&t.subject, o));
                }
            }
            (Term::Iri(o), OWL_EQUIVALENT_CLASS) => {
                g.classes.insert(t.subject.clone());
                g.classes.insert(o.clone());
                if &t.subject != o {
                    g.equivalent_pairs.insert(ordered(&t.subject, o));
                }
            }
            (Term::Iri(o), OWL_SAME_AS) => {
                if &t.subject != o {
                    g.same_as_pairs.insert(ordered(&t.subject, o));
                }
            }
            (Term::Iri(o), RDFS_DOMAIN) => {
                g.properties.insert(t.subject.clone());
                g.classes.insert(o.clone());
                g.domains.entry(t.subject.clone()).or_default().insert(o.clone());
            }
            (Term::Iri(o), RDFS_RANGE) => {
                g.properties.insert(t.subject.clone());
                g.classes.insert(o.clone());
                g.ranges.entry(t.subject.clone()).or_default().insert(o.clone());
            }
            (Term::Literal(l), RDFS_LABEL) => {
                g.labels.entry(t.subject.clone()).or_default().insert(l.clone());
            }
            _ => {}
        }
    }

    g.model_issues = datatypes
        .intersection(&g.classes)
        .map(|dt| ModelError::DatatypeUsedAsClass(dt.clone()))
        .collect();
    g.triples = ts;
    g
}

/// Like [`build_ontology`] but fails on the first model error.
pub fn build_ontology_strict(ts: TripleSet) -> Result<OntologyGraph, ModelError> {
    let g = build_ontology(ts);
    match g.model_issues.first() {
        Some(e) => Err(e.clone()),
        None => Ok(g),
    }
}

/// Splits `SpiderMite`, `spider_mite` or `spider-mite` into `spider mite`.
pub fn humanize_local_name(local: &str) -> String {
    let mut out = String::new();
    let mut prev: Option<char> = None;
    for c in local.chars() {
        if matches!(c, '_' | '-' | '.' | '%') {
            out.push(' ');
        } else {
            if c.is_uppercase() && prev.is_some_and(|p| p.is_lowercase() || p.is_ascii_digit()) {
                out.push(' ');
            }
            out.push(c);
        }
        prev = Some(c);
    }
    out.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase()
}

static EMPTY: BTreeSet<Iri> = BTreeSet::new();

impl OntologyGraph {
    pub fn triples(&self) -> &TripleSet {
        &self.triples
    }

    pub fn into_triples(self) -> TripleSet {
        self.triples
    }

    pub fn classes(&self) -> &BTreeSet<Iri> {
        &self.classes
    }

    pub fn properties(&self) -> &BTreeSet<Iri> {
        &self.properties
    }

    pub fn instances(&self) -> &BTreeSet<Iri> {
        &self.instances
    }

    pub fn subclass_edges(&self) -> &BTreeSet<(Iri, Iri)> {
        &self.subclass_edges
    }

    pub fn disjoint_pairs(&self) -> &BTreeSet<(Iri, Iri)> {
        &self.disjoint_pairs
    }

    pub fn equivalent_pairs(&self) -> &BTreeSet<(Iri, Iri)> {
        &self.equivalent_pairs
    }

    pub fn same_as_pairs(&self) -> &BTreeSet<(Iri, Iri)> {
        &self.same_as_pairs
    }

    pub fn labels(&self) -> &BTreeMap<Iri, BTreeSet<Literal>> {
        &self.labels
    }

    pub fn domains(&self) -> &BTreeMap<Iri, BTreeSet<Iri>> {
        &self.domains
    }

    pub fn ranges(&self) -> &BTreeMap<Iri, BTreeSet<Iri>> {
        &self.ranges
    }

    pub fn type_assertions(&self) -> &BTreeSet<(Iri, Iri)> {
        &self.type_assertions
    }

    pub fn namespaces(&self) -> &BTreeSet<String> {
        &self.namespaces
    }

    /// Classes explicitly typed `owl:Class` or `rdfs:Class`.
    pub fn declared_classes(&self) -> &BTreeSet<Iri> {
        &self.declared_classes
    }

    /// Properties explicitly typed `owl:ObjectProperty` or `rdf:Property`.
    pub fn declared_properties(&self) -> &BTreeSet<Iri> {
        &self.declared_properties
    }

    pub fn model_issues(&self) -> &[ModelError] {
        &self.model_issues
    }

    /// Direct superclasses.
    pub fn parents(&self, class: &Iri) -> &BTreeSet<Iri> {
        self.parents.get(class).unwrap_or(&EMPTY)
    }

    pub fn parent_map(&self) -> &BTreeMap<Iri, BTreeSet<Iri>> {
        &self.parents
    }

    pub fn domains_of(&self, property: &Iri) -> &BTreeSet<Iri> {
        self.domains.get(property).unwrap_or(&EMPTY)
    }

    pub fn ranges_of(&self, property: &Iri) -> &BTreeSet<Iri> {
        self.ranges.get(property).unwrap_or(&EMPTY)
    }

    /// Asserted types of an instance.
    pub fn types_of<'a>(&'a self, instance: &'a Iri) -> impl Iterator<Item = &'a Iri> + 'a {
        let lo = (instance.clone(), Iri::new("\u{21}").expect("constant"));
        self.type_assertions
            .range(lo..)
            .take_while(move |(i, _)| i == instance)
            .map(|(_, c)| c)
    }

    /// Classes, properties and instances, excluding blank nodes.
    pub fn named_entities(&self) -> BTreeSet<Iri> {
        self.classes
            .iter()
            .chain(&self.properties)
            .chain(&self.instances)
            .filter(|i| !i.is_blank())
            .cloned()
            .collect()
    }

    /// `rdfs:label` values, or the humanized local name when there are none.
    pub fn display_labels(&self, entity: &Iri) -> Vec<String> {
        match self.labels.get(entity) {
            Some(ls) if !ls.is_empty() => {
                let set: BTreeSet<String> = ls.iter().map(|l| l.lexical().to_string()).collect();
                set.into_iter().collect()
            }
            _ => vec![humanize_local_name(entity.local_name())],
        }
    }

    /// True when the entity is the subject of at least one triple.
    pub fn is_described(&self, entity: &Iri) -> bool {
        let lo = super::term::Triple::new(entity.clone(), Iri::new("\u{21}").expect("constant"), Iri::new("\u{21}").expect("constant"));
        self.triples.triples.range(lo..).next().is_some_and(|t| &t.subject == entity)
    }
}
