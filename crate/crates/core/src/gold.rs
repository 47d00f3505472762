//! Comparison of a candidate ontology with a benchmark ("gold standard")
//! ontology: label alignment, lexical precision/recall, and taxonomic overlap
//! of aligned entities.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::{self, Execution};
use crate::framework::{Level, Method};
use crate::metric::MetricResult;
use crate::rdf::{Iri, OntologyGraph};
use crate::taxonomy;
use crate::text::normalize_text;

pub const DEFAULT_THRESHOLD: f64 = 0.8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GoldError {
    #[error("{side} ontology has a cyclic subclass hierarchy")]
    CyclicGraph { side: &'static str },
    #[error("threshold {0} outside (0, 1]")]
    BadThreshold(String),
}

fn levenshtein(a: &[char], b: &[char]) -> usize {
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0; b.len() + 1];
    for (i, ca) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != cb);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// `1 - levenshtein / max_len` over normalized text; 1.0 for two empty strings.
pub fn string_similarity(a: &str, b: &str) -> f64 {
    let a: Vec<char> = normalize_text(a).chars().collect();
    let b: Vec<char> = normalize_text(b).chars().collect();
    let max = a.len().max(b.len());
    if max == 0 {
        return 1.0;
    }
    1.0 - levenshtein(&a, &b) as f64 / max as f64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchPair {
    pub candidate: Iri,
    pub gold: Iri,
    pub similarity: f64,
    pub matched_label_pair: (String, String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Alignment {
    pub pairs: Vec<MatchPair>,
    pub threshold: f64,
    pub unmatched_candidate: BTreeSet<Iri>,
    pub unmatched_gold: BTreeSet<Iri>,
}

impl Alignment {
    pub fn candidate_to_gold(&self) -> BTreeMap<&Iri, &Iri> {
        self.pairs.iter().map(|p| (&p.candidate, &p.gold)).collect()
    }
}

const BINS: usize = 32;

/// A label with its normalized characters and coarse character statistics.
struct Label {
    text: String,
    chars: Vec<char>,
    bins: [u16; BINS],
    mask: u64,
}

impl Label {
    fn new(text: String) -> Self {
        let chars: Vec<char> = normalize_text(&text).chars().collect();
        let mut bins = [0u16; BINS];
        let mut mask = 0u64;
        for &c in &chars {
            let b = &mut bins[c as usize % BINS];
            *b = b.saturating_add(1);
            mask |= 1 << (c as u32 % 64);
        }
        Label { text, chars, bins, mask }
    }

    /// Cheaper, weaker bound: every character class present on one side
    /// only costs at least one edit.
    fn mask_distance(&self, other: &Label) -> usize {
        (self.mask & !other.mask).count_ones().max((other.mask & !self.mask).count_ones()) as usize
    }

    /// Lower bound on the edit distance: each edit moves at most one
    /// character into or out of each histogram.
    fn bag_distance(&self, other: &Label) -> usize {
        let (mut more, mut less) = (0usize, 0usize);
        for (x, y) in self.bins.iter().zip(&other.bins) {
            if x > y {
                more += usize::from(x - y);
            } else {
                less += usize::from(y - x);
            }
        }
        more.max(less)
    }
}

fn similarity_from(distance: usize, max: usize) -> f64 {
    if max == 0 {
        1.0
    } else {
        1.0 - distance as f64 / max as f64
    }
}

/// Largest edit distance that still reaches `threshold` for strings whose
/// longer side has `max` characters.
fn distance_budget(max: usize, threshold: f64) -> Option<usize> {
    let mut d = (((1.0 - threshold) * max as f64).floor().max(0.0) as usize).min(max);
    while d > 0 && similarity_from(d, max) < threshold {
        d -= 1;
    }
    while d < max && similarity_from(d + 1, max) >= threshold {
        d += 1;
    }
    (similarity_from(d, max) >= threshold).then_some(d)
}

/// Edit distance if it is at most `k`. Only the diagonal band of width
/// `2k + 1` is filled, and the scan stops once a whole row exceeds `k`.
fn levenshtein_within(a: &[char], b: &[char], k: usize, rows: &mut (Vec<usize>, Vec<usize>)) -> Option<usize> {
    if a.len().abs_diff(b.len()) > k {
        return None;
    }
    const FAR: usize = usize::MAX / 2;
    let (prev, cur) = rows;
    prev.clear();
    prev.extend((0..=b.len()).map(|j| if j <= k { j } else { FAR }));
    cur.clear();
    cur.resize(b.len() + 1, FAR);
    for (i, ca) in a.iter().enumerate() {
        let row = i + 1;
        let lo = row.saturating_sub(k).max(1);
        let hi = (row + k).min(b.len());
        cur[0] = if row <= k { row } else { FAR };
        if lo > 1 {
            cur[lo - 1] = FAR;
        }
        let mut best = cur[0];
        for j in lo..=hi {
            let sub = prev[j - 1] + usize::from(*ca != b[j - 1]);
            let v = sub.min(prev[j] + 1).min(cur[j - 1] + 1);
            cur[j] = v;
            best = best.min(v);
        }
        if hi < b.len() {
            cur[hi + 1] = FAR;
        }
        if best > k {
            return None;
        }
        std::mem::swap(prev, cur);
    }
    let d = prev[b.len()];
    (d <= k).then_some(d)
}

type Rows = (Vec<usize>, Vec<usize>);

/// Similarity of two labels when their edit distance is at most `k`.
fn similarity_within(a: &Label, b: &Label, k: usize, rows: &mut Rows) -> Option<f64> {
    if a.mask_distance(b) > k || a.bag_distance(b) > k {
        return None;
    }
    let max = a.chars.len().max(b.chars.len());
    levenshtein_within(&a.chars, &b.chars, k, rows).map(|d| similarity_from(d, max))
}

/// Gold labels grouped by character length.
struct GoldIndex<'a> {
    by_len: BTreeMap<usize, Vec<(usize, &'a Label)>>,
}

impl<'a> GoldIndex<'a> {
    fn new(golds: &'a [(Iri, Vec<Label>)]) -> Self {
        let mut by_len: BTreeMap<usize, Vec<(usize, &Label)>> = BTreeMap::new();
        for (gi, (_, ls)) in golds.iter().enumerate() {
            for l in ls {
                by_len.entry(l.chars.len()).or_default().push((gi, l));
            }
        }
        GoldIndex { by_len }
    }

    /// For every gold entity with a label pair reaching `threshold`, the best
    /// such pair; ties go to the lexicographically smallest pair.
    fn best_pairs(&self, cl: &'a [Label], threshold: f64, rows: &mut Rows) -> BTreeMap<usize, (f64, &'a str, &'a str)> {
        let mut best: BTreeMap<usize, (f64, &str, &str)> = BTreeMap::new();
        for a in cl {
            for (&len, bucket) in &self.by_len {
                let k = match distance_budget(a.chars.len().max(len), threshold) {
                    Some(k) if a.chars.len().abs_diff(len) <= k => k,
                    _ => continue,
                };
                for &(gi, b) in bucket {
                    let Some(s) = similarity_within(a, b, k, rows) else { continue };
                    let cand = (s, a.text.as_str(), b.text.as_str());
                    match best.get(&gi) {
                        Some(&(bs, ba, bb)) if !(s > bs || (s == bs && (cand.1, cand.2) < (ba, bb))) => {}
                        _ => {
                            best.insert(gi, cand);
                        }
                    }
                }
            }
        }
        best
    }
}

pub fn align_lexicon(candidate: &OntologyGraph, gold: &OntologyGraph, threshold: f64) -> Alignment {
    align_lexicon_with(candidate, gold, threshold, Execution::default())
}

/// Greedy one-to-one matching over all entity pairs with similarity ≥
/// threshold, best first, ties broken by (candidate, gold) IRI order.
pub fn align_lexicon_with(candidate: &OntologyGraph, gold: &OntologyGraph, threshold: f64, mode: Execution) -> Alignment {
    let labelled = |g: &OntologyGraph| -> Vec<(Iri, Vec<Label>)> {
        g.named_entities()
            .into_iter()
            .map(|e| {
                let ls = g.display_labels(&e).into_iter().map(Label::new).collect();
                (e, ls)
            })
            .collect()
    };
    let cands = labelled(candidate);
    let golds = labelled(gold);

    let index = GoldIndex::new(&golds);
    let mut scored: Vec<(f64, usize, usize, String, String)> = exec::flat_map(&(0..cands.len()).collect::<Vec<_>>(), mode, |&ci| {
        let mut rows = (Vec::new(), Vec::new());
        index
            .best_pairs(&cands[ci].1, threshold, &mut rows)
            .into_iter()
            .map(|(gi, (s, a, b))| (s, ci, gi, a.to_string(), b.to_string()))
            .collect()
    });
    // entity lists are sorted, so index order is IRI order
    scored.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));

    let mut used_c = vec![false; cands.len()];
    let mut used_g = vec![false; golds.len()];
    let mut pairs = Vec::new();
    for (s, ci, gi, a, b) in scored {
        if used_c[ci] || used_g[gi] {
            continue;
        }
        used_c[ci] = true;
        used_g[gi] = true;
        pairs.push(MatchPair { candidate: cands[ci].0.clone(), gold: golds[gi].0.clone(), similarity: s, matched_label_pair: (a, b) });
    }
    let unmatched_candidate = cands.iter().zip(&used_c).filter(|(_, u)| !**u).map(|(c, _)| c.0.clone()).collect();
    let unmatched_gold = golds.iter().zip(&used_g).filter(|(_, u)| !**u).map(|(g, _)| g.0.clone()).collect();
    Alignment { pairs, threshold, unmatched_candidate, unmatched_gold }
}

/// Precision, recall and F1 of an alignment, in that order.
pub fn lexical_precision_recall(a: &Alignment, candidate_count: usize, gold_count: usize) -> [MetricResult; 3] {
    let n = a.pairs.len() as f64;
    let precision = if candidate_count == 0 { 0.0 } else { n / candidate_count as f64 };
    let recall = if gold_count == 0 { 0.0 } else { n / gold_count as f64 };
    let f1 = if precision + recall == 0.0 { 0.0 } else { 2.0 * precision * recall / (precision + recall) };
    let prov = format!("{} aligned pairs, {candidate_count} candidate entities, {gold_count} gold entities, threshold {}", a.pairs.len(), a.threshold);
    [
        MetricResult::ratio("lexical_precision", precision, Level::Lexical, Method::GoldStandard, &prov).degenerate(candidate_count == 0),
        MetricResult::ratio("lexical_recall", recall, Level::Lexical, Method::GoldStandard, &prov).degenerate(gold_count == 0),
        MetricResult::ratio("lexical_f1", f1, Level::Lexical, Method::GoldStandard, &prov),
    ]
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Side<'a> {
    Gold(&'a Iri),
    CandidateOnly(&'a Iri),
}

/// Mean Jaccard agreement between each aligned candidate entity's ancestors
/// (mapped through the alignment) and its gold partner's ancestors.
pub fn taxonomic_overlap(candidate: &OntologyGraph, gold: &OntologyGraph, a: &Alignment) -> Result<MetricResult, GoldError> {
    if !taxonomy::is_acyclic(candidate) {
        return Err(GoldError::CyclicGraph { side: "candidate" });
    }
    if !taxonomy::is_acyclic(gold) {
        return Err(GoldError::CyclicGraph { side: "gold" });
    }
    let map = a.candidate_to_gold();
    let mut scores = Vec::with_capacity(a.pairs.len());
    let mut notes = Vec::new();
    for p in &a.pairs {
        let ca = taxonomy::ancestors(candidate, &p.candidate);
        let ga = taxonomy::ancestors(gold, &p.gold);
        let image: BTreeSet<Side<'_>> = ca.iter().map(|x| map.get(x).map_or(Side::CandidateOnly(x), |g| Side::Gold(g))).collect();
        let gset: BTreeSet<Side<'_>> = ga.iter().map(Side::Gold).collect();
        let union = image.union(&gset).count();
        let score = if union == 0 { 1.0 } else { image.intersection(&gset).count() as f64 / union as f64 };
        if score < 1.0 {
            notes.push(format!("{} ~ {}: {score:.4}", p.candidate, p.gold));
        }
        scores.push(score);
    }
    let value = if scores.is_empty() { 0.0 } else { scores.iter().sum::<f64>() / scores.len() as f64 };
    Ok(MetricResult::ratio(
        "taxonomic_overlap",
        value,
        Level::Hierarchy,
        Method::GoldStandard,
        &format!("mean ancestor-set Jaccard over {} aligned pairs", scores.len()),
    )
    .degenerate(scores.is_empty())
    .with_notes(notes))
}

/// Alignment plus its lexical and taxonomic measures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub alignment: Alignment,
    pub metrics: Vec<MetricResult>,
}

pub fn compare(candidate: &OntologyGraph, gold: &OntologyGraph, threshold: f64, mode: Execution) -> Result<Comparison, GoldError> {
    if !(threshold > 0.0 && threshold <= 1.0) {
        return Err(GoldError::BadThreshold(threshold.to_string()));
    }
    let alignment = align_lexicon_with(candidate, gold, threshold, mode);
    let cn = alignment.pairs.len() + alignment.unmatched_candidate.len();
    let gn = alignment.pairs.len() + alignment.unmatched_gold.len();
    let mut metrics: Vec<MetricResult> = lexical_precision_recall(&alignment, cn, gn).into();
    metrics.push(taxonomic_overlap(candidate, gold, &alignment)?);
    Ok(Comparison { alignment, metrics })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::{build_ontology, vocab::RDFS_SUBCLASS_OF, Triple};

    #[test]
    fn banded_distance_agrees_with_full() {
        let words = ["", "a", "ab", "ba", "abc", "acb", "aphid", "aphids", "spider mite", "mite", "kitten", "sitting", "éa"];
        let mut rows = (Vec::new(), Vec::new());
        for a in words {
            for b in words {
                let (ca, cb): (Vec<char>, Vec<char>) = (a.chars().collect(), b.chars().collect());
                let d = levenshtein(&ca, &cb);
                for k in 0..8 {
                    let want = (d <= k).then_some(d);
                    assert_eq!(levenshtein_within(&ca, &cb, k, &mut rows), want, "{a:?} {b:?} k={k}");
                }
            }
        }
    }

    #[test]
    fn prefilters_are_lower_bounds() {
        let words = ["", "a", "ab", "ba", "abc", "aphid 12", "aphid 45", "spider mite", "mite", "kitten", "sitting", "é!", "A a"];
        for a in words {
            for b in words {
                let (la, lb) = (Label::new(a.into()), Label::new(b.into()));
                let d = levenshtein(&la.chars, &lb.chars);
                assert!(la.mask_distance(&lb) <= d && la.bag_distance(&lb) <= d, "{a:?} {b:?}");
            }
        }
    }

    #[test]
    fn budget_is_the_exact_cutoff() {
        for max in 0..40 {
            for t in [0.05, 0.3, 0.5, 0.7, 0.8, 0.9, 0.95, 1.0] {
                let k = distance_budget(max, t).unwrap();
                assert!(similarity_from(k, max) >= t);
                assert!(k == max || similarity_from(k + 1, max) < t);
            }
        }
    }

    #[test]
    fn similarity_examples() {
        assert_eq!(string_similarity("Aphid", "aphid"), 1.0);
        assert!((string_similarity("colour", "color") - 5.0 / 6.0).abs() < 1e-12);
        assert_eq!(string_similarity("abc", "xyz"), 0.0);
        assert_eq!(string_similarity("", "  "), 1.0);
    }

    #[test]
    fn precision_recall_examples() {
        let pair = |i: usize| MatchPair {
            candidate: Iri::new(format!("c:{i}")).unwrap(),
            gold: Iri::new(format!("g:{i}")).unwrap(),
            similarity: 1.0,
            matched_label_pair: (String::new(), String::new()),
        };
        let a = Alignment { pairs: (0..3).map(pair).collect(), threshold: 0.8, unmatched_candidate: BTreeSet::new(), unmatched_gold: BTreeSet::new() };
        let [p, r, f] = lexical_precision_recall(&a, 4, 6);
        assert_eq!(p.value, 0.75);
        assert_eq!(r.value, 0.5);
        assert!((f.value - 0.6).abs() < 1e-12);
        let [p, r, f] = lexical_precision_recall(&a, 3, 3);
        assert_eq!((p.value, r.value, f.value), (1.0, 1.0, 1.0));
        let empty = Alignment { pairs: vec![], ..a };
        let [p, r, f] = lexical_precision_recall(&empty, 0, 5);
        assert_eq!((p.value, r.value, f.value), (0.0, 0.0, 0.0));
        assert!(p.degenerate);
    }

    fn chain(ns: &str, names: &[&str]) -> OntologyGraph {
        let sub = Iri::new(RDFS_SUBCLASS_OF).unwrap();
        let iri = |n: &str| Iri::new(format!("http://{ns}/{n}")).unwrap();
        build_ontology(names.windows(2).map(|w| Triple::new(iri(w[0]), sub.clone(), iri(w[1]))).collect())
    }

    #[test]
    fn identical_chains_align_fully() {
        let c = chain("cand", &["Aphid", "Insect", "Organism"]);
        let g = chain("gold", &["Aphid", "Insect", "Organism"]);
        let cmp = compare(&c, &g, DEFAULT_THRESHOLD, Execution::Sequential).unwrap();
        assert_eq!(cmp.alignment.pairs.len(), 3);
        assert!(cmp.alignment.pairs.iter().all(|p| p.similarity == 1.0));
        assert!(cmp.metrics.iter().all(|m| m.value == 1.0), "{:?}", cmp.metrics);
    }

    #[test]
    fn empty_gold() {
        let c = chain("cand", &["Aphid", "Insect"]);
        let a = align_lexicon(&c, &OntologyGraph::default(), 0.8);
        assert!(a.pairs.is_empty());
        assert_eq!(a.unmatched_candidate.len(), 2);
    }

    #[test]
    fn disjoint_aligned_ancestors_score_zero() {
        let text = |ns: &str, parent: &str, other: &str| {
            format!(
                "<http://{ns}/Aphid> <{RDFS_SUBCLASS_OF}> <http://{ns}/{parent}> .\n<http://{ns}/{other}> <{RDFS_SUBCLASS_OF}> <http://{ns}/Thing> .\n"
            )
        };
        let c = build_ontology(crate::rdf::parse_ntriples(&text("cand", "Insect", "Plant")).unwrap());
        let g = build_ontology(crate::rdf::parse_ntriples(&text("gold", "Plant", "Insect")).unwrap());
        let a = align_lexicon(&c, &g, 0.8);
        assert_eq!(a.pairs.len(), 4);
        let r = taxonomic_overlap(&c, &g, &a).unwrap();
        // Aphid pair scores 0; Insect/Plant pairs score 0 (Thing vs none); Thing pair scores 1
        assert!(r.notes.iter().any(|n| n.starts_with("<http://cand/Aphid> ~ <http://gold/Aphid>: 0.0000")), "{:?}", r.notes);
        assert_eq!(r.value, 0.25);
    }

    #[test]
    fn threshold_is_validated() {
        let c = chain("cand", &["A", "B"]);
        assert!(compare(&c, &c, 0.0, Execution::Sequential).is_err());
        assert!(compare(&c, &c, 1.5, Execution::Sequential).is_err());
    }
}
