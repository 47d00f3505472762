//! Triple patterns, binding rows and an indexed triple store used by both the
//! rule engine and the query evaluator.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::rdf::vocab::RDF_TYPE;
use crate::rdf::{Iri, Term, TermError, Triple};

pub type Bindings = BTreeMap<String, Term>;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PatternTerm {
    Var(String),
    Const(Term),
}

impl PatternTerm {
    pub fn var(name: &str) -> Self {
        PatternTerm::Var(name.to_string())
    }

    pub fn iri(iri: &str) -> Self {
        PatternTerm::Const(Term::Iri(Iri::new(iri).expect("valid IRI")))
    }

    pub fn as_var(&self) -> Option<&str> {
        match self {
            PatternTerm::Var(v) => Some(v),
            PatternTerm::Const(_) => None,
        }
    }

    fn resolve<'a>(&'a self, row: &'a Bindings) -> Option<&'a Term> {
        match self {
            PatternTerm::Var(v) => row.get(v),
            PatternTerm::Const(t) => Some(t),
        }
    }
}

pub(crate) fn valid_var_name(name: &str) -> bool {
    !name.is_empty() && name.chars().all(|c| c.is_alphanumeric() || c == '_')
}

impl fmt::Display for PatternTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternTerm::Var(v) => write!(f, "?{v}"),
            PatternTerm::Const(t) => write!(f, "{t}"),
        }
    }
}

/// Token syntax: `?x`, `<iri>`, `_:b`, an N-Triples literal, `a`, or a bare absolute IRI.
impl FromStr for PatternTerm {
    type Err = TermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Some(v) = s.strip_prefix('?').or_else(|| s.strip_prefix('$')) {
            if !valid_var_name(v) {
                return Err(TermError::Invalid { text: s.to_string(), reason: "bad variable name".into() });
            }
            return Ok(PatternTerm::Var(v.to_string()));
        }
        parse_term_token(s).map(PatternTerm::Const)
    }
}

/// A constant token: `<iri>`, `_:b`, literal, `a`, or a bare IRI with a scheme.
pub(crate) fn parse_term_token(s: &str) -> Result<Term, TermError> {
    if s == "a" {
        return Ok(Term::Iri(Iri::new(RDF_TYPE)?));
    }
    if s.starts_with('<') || s.starts_with('"') || s.starts_with("_:") {
        return s.parse();
    }
    let iri = Iri::new(s)?;
    if !iri.is_absolute() {
        return Err(TermError::Invalid { text: s.to_string(), reason: "bare IRI needs a scheme".into() });
    }
    Ok(Term::Iri(iri))
}

impl Serialize for PatternTerm {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PatternTerm {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        String::deserialize(deserializer)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "[PatternTerm; 3]", into = "[PatternTerm; 3]")]
pub struct TriplePattern {
    pub subject: PatternTerm,
    pub predicate: PatternTerm,
    pub object: PatternTerm,
}

impl From<[PatternTerm; 3]> for TriplePattern {
    fn from([subject, predicate, object]: [PatternTerm; 3]) -> Self {
        TriplePattern { subject, predicate, object }
    }
}

impl From<TriplePattern> for [PatternTerm; 3] {
    fn from(p: TriplePattern) -> Self {
        [p.subject, p.predicate, p.object]
    }
}

impl fmt::Display for TriplePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.subject, self.predicate, self.object)
    }
}

impl TriplePattern {
    pub fn new(subject: PatternTerm, predicate: PatternTerm, object: PatternTerm) -> Self {
        TriplePattern { subject, predicate, object }
    }

    pub fn positions(&self) -> [&PatternTerm; 3] {
        [&self.subject, &self.predicate, &self.object]
    }

    pub fn variables(&self) -> impl Iterator<Item = &str> {
        self.positions().into_iter().filter_map(PatternTerm::as_var)
    }

    /// Extends `row` so the pattern matches `t`, or `None` on conflict.
    pub fn unify(&self, t: &Triple, row: &Bindings) -> Option<Bindings> {
        let values = [Term::Iri(t.subject.clone()), Term::Iri(t.predicate.clone()), t.object.clone()];
        let mut out = row.clone();
        for (pt, value) in self.positions().into_iter().zip(values) {
            match pt {
                PatternTerm::Const(c) => {
                    if *c != value {
                        return None;
                    }
                }
                PatternTerm::Var(v) => match out.get(v) {
                    Some(bound) if *bound != value => return None,
                    Some(_) => {}
                    None => {
                        out.insert(v.clone(), value);
                    }
                },
            }
        }
        Some(out)
    }

    /// Ground triple for the row, if every position resolves to a term valid there.
    pub fn instantiate(&self, row: &Bindings) -> Option<Triple> {
        let s = self.subject.resolve(row)?.as_iri()?.clone();
        let p = self.predicate.resolve(row)?.as_iri()?.clone();
        if p.is_blank() {
            return None;
        }
        let o = self.object.resolve(row)?.clone();
        Some(Triple { subject: s, predicate: p, object: o })
    }
}

/// Insert-only triple store with subject, predicate and object indexes.
#[derive(Debug, Default, Clone)]
pub struct TripleIndex {
    triples: Vec<Triple>,
    seen: HashSet<Triple>,
    by_s: HashMap<Iri, Vec<usize>>,
    by_p: HashMap<Iri, Vec<usize>>,
    by_o: HashMap<Term, Vec<usize>>,
}

impl TripleIndex {
    pub fn new<'a>(triples: impl IntoIterator<Item = &'a Triple>) -> Self {
        let mut idx = TripleIndex::default();
        for t in triples {
            idx.insert(t.clone());
        }
        idx
    }

    pub fn insert(&mut self, t: Triple) -> bool {
        if self.seen.contains(&t) {
            return false;
        }
        let i = self.triples.len();
        self.by_s.entry(t.subject.clone()).or_default().push(i);
        self.by_p.entry(t.predicate.clone()).or_default().push(i);
        self.by_o.entry(t.object.clone()).or_default().push(i);
        self.seen.insert(t.clone());
        self.triples.push(t);
        true
    }

    pub fn contains(&self, t: &Triple) -> bool {
        self.seen.contains(t)
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Triple> {
        self.triples.iter()
    }

    /// Triples that could match the pattern under `row`, narrowed by the most selective bound position.
    fn candidates<'a>(&'a self, p: &TriplePattern, row: &Bindings) -> Box<dyn Iterator<Item = &'a Triple> + 'a> {
        const EMPTY: &[usize] = &[];
        let mut best: Option<&[usize]> = None;
        let mut consider = |list: &'a [usize]| {
            if best.is_none_or(|b| list.len() < b.len()) {
                best = Some(list);
            }
        };
        if let Some(s) = p.subject.resolve(row) {
            consider(s.as_iri().and_then(|i| self.by_s.get(i)).map_or(EMPTY, Vec::as_slice));
        }
        if let Some(pr) = p.predicate.resolve(row) {
            consider(pr.as_iri().and_then(|i| self.by_p.get(i)).map_or(EMPTY, Vec::as_slice));
        }
        if let Some(o) = p.object.resolve(row) {
            consider(self.by_o.get(o).map_or(EMPTY, Vec::as_slice));
        }
        match best {
            Some(list) => Box::new(list.iter().map(move |&i| &self.triples[i])),
            None => Box::new(self.triples.iter()),
        }
    }

    pub fn match_pattern(&self, p: &TriplePattern, row: &Bindings) -> Vec<Bindings> {
        self.candidates(p, row).filter_map(|t| p.unify(t, row)).collect()
    }
}

/// Joins `patterns` onto the seed rows. Patterns are taken greedily by the
/// number of positions already bound; the result set does not depend on order.
pub fn solve(index: &TripleIndex, patterns: &[TriplePattern], seeds: Vec<Bindings>) -> Vec<Bindings> {
    let mut rows = seeds;
    let mut bound: BTreeSet<String> = rows.first().map(|r| r.keys().cloned().collect()).unwrap_or_default();
    let mut remaining: Vec<&TriplePattern> = patterns.iter().collect();
    while !remaining.is_empty() && !rows.is_empty() {
        let score = |p: &TriplePattern| p.positions().iter().filter(|t| t.as_var().is_none_or(|v| bound.contains(v))).count();
        let (pick, _) = remaining.iter().enumerate().max_by_key(|(i, p)| (score(p), std::cmp::Reverse(*i))).expect("non-empty");
        let p = remaining.remove(pick);
        rows = rows.iter().flat_map(|r| index.match_pattern(p, r)).collect();
        bound.extend(p.variables().map(str::to_string));
    }
    rows
}
