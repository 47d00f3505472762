//! Data-driven evaluation against a document corpus: term statistics, TF-IDF
//! term extraction, lexical coverage/focus, and a co-occurrence proxy for the
//! structural fit of the subclass hierarchy.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::{self, Execution};
use crate::framework::{Level, Method};
use crate::metric::MetricResult;
use crate::rdf::OntologyGraph;
use crate::taxonomy;
use crate::text::tokenize;

pub const DEFAULT_WINDOW: usize = 10;
pub const DEFAULT_TOP_K: usize = 50;

/// Applied to unigram term extraction only.
pub const STOP_WORDS: [&str; 50] = [
    "a", "an", "the", "and", "or", "but", "if", "of", "in", "on", "at", "to", "for", "with", "by", "from", "as", "is", "are",
    "was", "were", "be", "been", "being", "it", "its", "this", "that", "these", "those", "not", "no", "can", "will", "would",
    "should", "may", "might", "do", "does", "did", "has", "have", "had", "he", "she", "they", "we", "you", "i",
];

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("duplicate document id {0:?}")]
    DuplicateDocId(String),
    #[error("corpus has no tokens")]
    EmptyCorpus,
    #[error("subclass hierarchy is cyclic")]
    CyclicGraph,
    #[error("window must be at least 2, got {0}")]
    BadWindow(usize),
    #[error("cannot read corpus at {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub doc_id: String,
    pub tokens: Vec<String>,
}

/// Tokenized documents with unigram and bigram statistics.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Corpus {
    pub documents: Vec<Document>,
    pub term_frequencies: BTreeMap<String, usize>,
    pub document_frequencies: BTreeMap<String, usize>,
    pub total_tokens: usize,
}

fn doc_terms(tokens: &[String]) -> impl Iterator<Item = String> + '_ {
    tokens.iter().cloned().chain(tokens.windows(2).map(|w| format!("{} {}", w[0], w[1])))
}

pub fn ingest_corpus(docs: &[(String, String)]) -> Result<Corpus, CorpusError> {
    ingest_corpus_with(docs, Execution::default())
}

pub fn ingest_corpus_with(docs: &[(String, String)], mode: Execution) -> Result<Corpus, CorpusError> {
    let mut ids = BTreeSet::new();
    for (id, _) in docs {
        if !ids.insert(id) {
            return Err(CorpusError::DuplicateDocId(id.clone()));
        }
    }
    let per_doc: Vec<(Document, HashMap<String, usize>)> = exec::map(docs, mode, |(id, text)| {
        let tokens = tokenize(text);
        let mut tf: HashMap<String, usize> = HashMap::new();
        for term in doc_terms(&tokens) {
            *tf.entry(term).or_default() += 1;
        }
        (Document { doc_id: id.clone(), tokens }, tf)
    });
    let mut c = Corpus::default();
    for (doc, tf) in per_doc {
        c.total_tokens += doc.tokens.len();
        for (term, n) in tf {
            *c.document_frequencies.entry(term.clone()).or_default() += 1;
            *c.term_frequencies.entry(term).or_default() += n;
        }
        c.documents.push(doc);
    }
    Ok(c)
}

/// Reads every `.txt` file in a directory (sorted by name); doc_id is the file name.
pub fn load_corpus_dir(dir: &Path, mode: Execution) -> Result<Corpus, CorpusError> {
    let io = |e: std::io::Error| CorpusError::Io { path: dir.display().to_string(), source: e };
    let mut docs = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(io)? {
        let path = entry.map_err(io)?.path();
        if path.is_file() && path.extension().is_some_and(|e| e == "txt") {
            let text = std::fs::read_to_string(&path).map_err(|e| CorpusError::Io { path: path.display().to_string(), source: e })?;
            let id = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
            docs.push((id, text));
        }
    }
    docs.sort();
    ingest_corpus_with(&docs, mode)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermRanking {
    pub terms: Vec<(String, f64)>,
    pub scoring: String,
}

/// Top-k terms by `tf * ln(1 + N / df)`, ties broken alphabetically.
pub fn extract_terms(c: &Corpus, k: usize) -> TermRanking {
    let n = c.documents.len() as f64;
    let mut scored: Vec<(String, f64)> = c
        .term_frequencies
        .iter()
        .filter(|(t, _)| t.contains(' ') || !STOP_WORDS.contains(&t.as_str()))
        .map(|(t, &tf)| {
            let df = c.document_frequencies[t] as f64;
            (t.clone(), tf as f64 * (1.0 + n / df).ln())
        })
        .collect();
    scored.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    scored.truncate(k);
    TermRanking { terms: scored, scoring: "tf-idf: tf * ln(1 + documents / df)".to_string() }
}

/// Normalized label token sequences of 1 or 2 tokens, plus the count of longer labels skipped.
fn label_terms(g: &OntologyGraph) -> (BTreeSet<String>, usize) {
    let mut out = BTreeSet::new();
    let mut skipped = BTreeSet::new();
    for e in g.named_entities() {
        for l in g.display_labels(&e) {
            let toks = tokenize(&l);
            match toks.len() {
                0 => {}
                1 | 2 => {
                    out.insert(toks.join(" "));
                }
                _ => {
                    skipped.insert(toks.join(" "));
                }
            }
        }
    }
    (out, skipped.len())
}

/// Coverage (share of ontology labels found in the corpus) and focus (share
/// of the top-k corpus terms found among ontology labels), in that order.
pub fn lexical_coverage(g: &OntologyGraph, c: &Corpus, k: usize) -> Result<[MetricResult; 2], CorpusError> {
    if c.total_tokens == 0 {
        return Err(CorpusError::EmptyCorpus);
    }
    let (labels, skipped) = label_terms(g);
    let covered = labels.iter().filter(|l| c.term_frequencies.contains_key(*l)).count();
    let coverage = if labels.is_empty() { 0.0 } else { covered as f64 / labels.len() as f64 };
    let mut notes = Vec::new();
    if skipped > 0 {
        notes.push(format!("{skipped} label(s) longer than two tokens not matched"));
    }
    let top = extract_terms(c, k);
    let focused = top.terms.iter().filter(|(t, _)| labels.contains(t)).count();
    let focus = if top.terms.is_empty() { 0.0 } else { focused as f64 / top.terms.len() as f64 };
    let unmatched_top: Vec<String> = top.terms.iter().filter(|(t, _)| !labels.contains(t)).take(10).map(|(t, _)| t.clone()).collect();
    Ok([
        MetricResult::ratio(
            "lexical_coverage",
            coverage,
            Level::Lexical,
            Method::DataDriven,
            &format!("{covered} of {} ontology labels occur in {} documents", labels.len(), c.documents.len()),
        )
        .degenerate(labels.is_empty())
        .with_notes(notes),
        MetricResult::ratio(
            "lexical_focus",
            focus,
            Level::Lexical,
            Method::DataDriven,
            &format!("{focused} of the top {} corpus terms are ontology labels", top.terms.len()),
        )
        .degenerate(top.terms.is_empty())
        .with_notes(unmatched_top.into_iter().map(|t| format!("top term without label: {t}")).collect()),
    ])
}

/// Token positions of one document, keyed by token.
struct PositionIndex<'a> {
    tokens: &'a [String],
    positions: HashMap<&'a str, Vec<usize>>,
}

impl<'a> PositionIndex<'a> {
    fn new(tokens: &'a [String]) -> Self {
        let mut positions: HashMap<&str, Vec<usize>> = HashMap::new();
        for (i, t) in tokens.iter().enumerate() {
            positions.entry(t.as_str()).or_default().push(i);
        }
        PositionIndex { tokens, positions }
    }

    /// Sorted start positions of a token sequence.
    fn occurrences(&self, phrase: &[String]) -> Vec<usize> {
        let Some(first) = phrase.first().and_then(|t| self.positions.get(t.as_str())) else {
            return Vec::new();
        };
        first
            .iter()
            .copied()
            .filter(|&i| self.tokens.get(i..i + phrase.len()).is_some_and(|w| w == phrase))
            .collect()
    }

    fn co_occur(&self, a: &[String], b: &[String], window: usize) -> bool {
        let pa = self.occurrences(a);
        if pa.is_empty() {
            return false;
        }
        let pb = self.occurrences(b);
        // two-pointer sweep over sorted start positions
        let (mut i, mut j) = (0, 0);
        while i < pa.len() && j < pb.len() {
            let (s1, s2) = (pa[i], pb[j]);
            let span = (s1 + a.len()).max(s2 + b.len()) - s1.min(s2);
            if span <= window {
                return true;
            }
            if s1 < s2 {
                i += 1;
            } else {
                j += 1;
            }
        }
        false
    }
}

/// Share of direct subclass edges whose class labels co-occur within a
/// `window`-token span in some document, over edges whose labels both occur.
pub fn structural_fit(g: &OntologyGraph, c: &Corpus, window: usize) -> Result<MetricResult, CorpusError> {
    if window < 2 {
        return Err(CorpusError::BadWindow(window));
    }
    if !taxonomy::is_acyclic(g) {
        return Err(CorpusError::CyclicGraph);
    }
    let present = |e| -> Vec<Vec<String>> {
        let mut ls: Vec<Vec<String>> = g
            .display_labels(e)
            .iter()
            .map(|l| tokenize(l))
            .filter(|t| (1..=2).contains(&t.len()) && c.term_frequencies.contains_key(&t.join(" ")))
            .collect();
        ls.dedup();
        ls
    };
    let indexes: Vec<PositionIndex> = c.documents.iter().map(|d| PositionIndex::new(&d.tokens)).collect();
    let mut considered = 0usize;
    let mut fit = 0usize;
    let mut notes = Vec::new();
    for (child, parent) in g.subclass_edges() {
        let (lc, lp) = (present(child), present(parent));
        if lc.is_empty() || lp.is_empty() {
            continue;
        }
        considered += 1;
        let hit = indexes.iter().any(|d| lc.iter().any(|a| lp.iter().any(|b| d.co_occur(a, b, window))));
        if hit {
            fit += 1;
        } else {
            notes.push(format!("no co-occurrence: {child} subClassOf {parent}"));
        }
    }
    let value = if considered == 0 { 1.0 } else { fit as f64 / considered as f64 };
    Ok(MetricResult::ratio(
        "structural_fit",
        value,
        Level::Hierarchy,
        Method::DataDriven,
        &format!("{fit} of {considered} subclass edges have labels co-occurring within {window} tokens"),
    )
    .degenerate(considered == 0)
    .with_notes(notes))
}
