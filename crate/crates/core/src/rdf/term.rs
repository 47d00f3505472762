use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use super::lexer::Cursor;

/// Rejected term text.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("IRI is empty")]
    EmptyIri,
    #[error("IRI {iri:?} contains forbidden character {ch:?}")]
    ForbiddenChar { iri: String, ch: char },
    #[error("IRI {0:?} uses the reserved blank-node prefix")]
    ReservedPrefix(String),
    #[error("literal cannot carry both a language tag and a datatype")]
    LangAndDatatype,
    #[error("invalid term {text:?}: {reason}")]
    Invalid { text: String, reason: String },
}

/// An IRI, or a document-local blank node stored with the `_:` prefix.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Iri(String);

fn forbidden_iri_char(c: char) -> bool {
    c <= ' ' || matches!(c, '<' | '>' | '"' | '{' | '}' | '|' | '^' | '`' | '\\')
}

impl Iri {
    pub fn new(value: impl Into<String>) -> Result<Self, TermError> {
        let value = value.into();
        if value.is_empty() {
            return Err(TermError::EmptyIri);
        }
        if value.starts_with("_:") {
            return Err(TermError::ReservedPrefix(value));
        }
        if let Some(ch) = value.chars().find(|&c| forbidden_iri_char(c)) {
            return Err(TermError::ForbiddenChar { iri: value, ch });
        }
        Ok(Iri(value))
    }

    /// Blank node with a document-local label.
    pub fn blank(label: &str) -> Result<Self, TermError> {
        if label.is_empty() || !label.chars().all(|c| c.is_alphanumeric() || matches!(c, '_' | '-' | '.')) || label.ends_with('.') {
            return Err(TermError::Invalid { text: format!("_:{label}"), reason: "bad blank node label".into() });
        }
        Ok(Iri(format!("_:{label}")))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_blank(&self) -> bool {
        self.0.starts_with("_:")
    }

    /// True when the IRI starts with a URI scheme (`scheme:`).
    pub fn is_absolute(&self) -> bool {
        if self.is_blank() {
            return true;
        }
        let Some(colon) = self.0.find(':') else { return false };
        let scheme = &self.0[..colon];
        let mut chars = scheme.chars();
        matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
            && chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'))
    }

    /// Text after the last `#` or `/` (or after the scheme colon when neither occurs).
    pub fn local_name(&self) -> &str {
        if let Some(label) = self.0.strip_prefix("_:") {
            return label;
        }
        match self.0.rfind(['#', '/']) {
            Some(i) if i + 1 < self.0.len() => &self.0[i + 1..],
            Some(_) => "",
            None => self.0.rfind(':').map_or(&self.0[..], |i| &self.0[i + 1..]),
        }
    }

    /// Namespace part: everything up to and including the last `#`, `/`, or `:`.
    pub fn namespace(&self) -> Option<&str> {
        if self.is_blank() {
            return None;
        }
        self.0.rfind(['#', '/', ':']).map(|i| &self.0[..=i])
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_blank() {
            f.write_str(&self.0)
        } else {
            write!(f, "<{}>", self.0)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    lexical: String,
    language: Option<String>,
    datatype: Option<Iri>,
}

impl Literal {
    pub fn plain(lexical: impl Into<String>) -> Self {
        Literal { lexical: lexical.into(), language: None, datatype: None }
    }

    pub fn lang(lexical: impl Into<String>, tag: impl Into<String>) -> Self {
        Literal { lexical: lexical.into(), language: Some(tag.into()), datatype: None }
    }

    pub fn typed(lexical: impl Into<String>, datatype: Iri) -> Self {
        Literal { lexical: lexical.into(), language: None, datatype: Some(datatype) }
    }

    pub fn new(lexical: impl Into<String>, language: Option<String>, datatype: Option<Iri>) -> Result<Self, TermError> {
        if language.is_some() && datatype.is_some() {
            return Err(TermError::LangAndDatatype);
        }
        Ok(Literal { lexical: lexical.into(), language, datatype })
    }

    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    pub fn language(&self) -> Option<&str> {
        self.language.as_deref()
    }

    pub fn datatype(&self) -> Option<&Iri> {
        self.datatype.as_ref()
    }
}

pub(crate) fn escape_literal(s: &str, out: &mut String) {
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '"' => out.push_str("\\\""),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 || c == '\u{7f}' => out.push_str(&format!("\\u{:04X}", c as u32)),
            c => out.push(c),
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::with_capacity(self.lexical.len() + 2);
        s.push('"');
        escape_literal(&self.lexical, &mut s);
        s.push('"');
        f.write_str(&s)?;
        if let Some(tag) = &self.language {
            write!(f, "@{tag}")?;
        } else if let Some(dt) = &self.datatype {
            write!(f, "^^{dt}")?;
        }
        Ok(())
    }
}

/// Object position of a triple.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Iri(Iri),
    Literal(Literal),
}

impl Term {
    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Term::Iri(i) => Some(i),
            Term::Literal(_) => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Term::Literal(l) => Some(l),
            Term::Iri(_) => None,
        }
    }
}

impl From<Iri> for Term {
    fn from(i: Iri) -> Self {
        Term::Iri(i)
    }
}

impl From<Literal> for Term {
    fn from(l: Literal) -> Self {
        Term::Literal(l)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(i) => i.fmt(f),
            Term::Literal(l) => l.fmt(f),
        }
    }
}

/// Parses one term in N-Triples syntax (`<iri>`, `_:label`, or a literal).
impl FromStr for Term {
    type Err = TermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut cur = Cursor::new(s.trim());
        let term = cur
            .read_nt_term()
            .map_err(|e| TermError::Invalid { text: s.to_string(), reason: e.reason })?;
        if !cur.at_end() {
            return Err(TermError::Invalid { text: s.to_string(), reason: "trailing characters".into() });
        }
        Ok(term)
    }
}

impl Serialize for Term {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Term {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Serialize for Iri {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Iri {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        match s.strip_prefix("_:") {
            Some(label) => Iri::blank(label),
            None => Iri::new(s),
        }
        .map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    pub subject: Iri,
    pub predicate: Iri,
    pub object: Term,
}

impl Triple {
    pub fn new(subject: Iri, predicate: Iri, object: impl Into<Term>) -> Self {
        Triple { subject, predicate, object: object.into() }
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}

/// A named set of triples. Duplicates collapse on insertion.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TripleSet {
    pub triples: BTreeSet<Triple>,
    pub source_name: String,
}

impl TripleSet {
    pub fn new(source_name: impl Into<String>) -> Self {
        TripleSet { triples: BTreeSet::new(), source_name: source_name.into() }
    }

    pub fn with_name(mut self, source_name: impl Into<String>) -> Self {
        self.source_name = source_name.into();
        self
    }

    pub fn insert(&mut self, t: Triple) -> bool {
        self.triples.insert(t)
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

    pub fn contains(&self, t: &Triple) -> bool {
        self.triples.contains(t)
    }

    /// Union of several sets; names are joined with `+`.
    pub fn merge<'a>(sets: impl IntoIterator<Item = &'a TripleSet>) -> TripleSet {
        let mut out = TripleSet::default();
        let mut names = Vec::new();
        for s in sets {
            out.triples.extend(s.triples.iter().cloned());
            names.push(s.source_name.clone());
        }
        out.source_name = names.join("+");
        out
    }
}

impl FromIterator<Triple> for TripleSet {
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> Self {
        TripleSet { triples: iter.into_iter().collect(), source_name: String::new() }
    }
}
