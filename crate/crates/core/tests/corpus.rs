mod support;

use std::collections::{BTreeMap, BTreeSet};

use onteval_core::corpus::{extract_terms, ingest_corpus, ingest_corpus_with, lexical_coverage, structural_fit, STOP_WORDS};
use onteval_core::rdf::vocab::{OWL_CLASS, RDFS_LABEL, RDFS_SUBCLASS_OF, RDF_TYPE};
use onteval_core::rdf::{build_ontology, Literal, OntologyGraph, Triple, TripleSet};
use onteval_core::Execution;
use rand::rngs::StdRng;
use rand::seq::IndexedRandom;
use rand::Rng;
use support::*;

const WORDS: &[&str] = &["aphid", "mite", "pest", "crop", "leaf", "the", "of", "spider", "tomato", "and"];

fn random_docs(r: &mut StdRng, n: usize) -> Vec<(String, String)> {
    (0..n)
        .map(|i| {
            let len = r.random_range(0..25);
            let text: Vec<&str> = (0..len).map(|_| *WORDS.choose(r).unwrap()).collect();
            (format!("d{i:02}.txt"), text.join(if r.random_bool(0.5) { " " } else { ", " }))
        })
        .collect()
}

fn oracle_tokens(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for ch in s.chars() {
        if ch.is_alphanumeric() {
            cur.extend(ch.to_lowercase());
        } else if !cur.is_empty() {
            out.push(std::mem::take(&mut cur));
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

fn oracle_tfidf(docs: &[(String, String)]) -> BTreeMap<String, f64> {
    let mut tf: BTreeMap<String, usize> = BTreeMap::new();
    let mut df: BTreeMap<String, usize> = BTreeMap::new();
    for (_, text) in docs {
        let toks = oracle_tokens(text);
        let mut terms: Vec<String> = toks.clone();
        for i in 1..toks.len() {
            terms.push(format!("{} {}", toks[i - 1], toks[i]));
        }
        let distinct: BTreeSet<&String> = terms.iter().collect();
        for t in distinct {
            *df.entry(t.clone()).or_default() += 1;
        }
        for t in terms {
            *tf.entry(t).or_default() += 1;
        }
    }
    let n = docs.len() as f64;
    tf.into_iter()
        .filter(|(t, _)| t.contains(' ') || !STOP_WORDS.contains(&t.as_str()))
        .map(|(t, f)| {
            let d = df[&t] as f64;
            (t, f as f64 * (1.0 + n / d).ln())
        })
        .collect()
}

#[test]
fn tfidf_matches_oracle() {
    for seed in 0..60 {
        let mut r = rng(seed);
        let n = r.random_range(1..8);
        let docs = random_docs(&mut r, n);
        let c = ingest_corpus(&docs).unwrap();
        let k = r.random_range(1..40);
        let got = extract_terms(&c, k);
        let expected = oracle_tfidf(&docs);
        assert_eq!(got.terms.len(), k.min(expected.len()));
        for (t, s) in &got.terms {
            assert!((expected[t] - s).abs() < 1e-9, "seed {seed} term {t}");
        }
        // no omitted term outranks the last returned one
        if let Some((last_t, last_s)) = got.terms.last() {
            let returned: BTreeSet<&String> = got.terms.iter().map(|(t, _)| t).collect();
            for (t, s) in &expected {
                if !returned.contains(t) {
                    assert!(*s < *last_s || (*s == *last_s && t > last_t), "seed {seed} missing {t}");
                }
            }
        }
        assert_eq!(ingest_corpus_with(&docs, Execution::Sequential).unwrap(), c);
    }
}

/// Classes n00.. labelled from the word list, with a random DAG hierarchy.
fn random_taxonomy(r: &mut StdRng) -> (OntologyGraph, Vec<String>, BTreeSet<(usize, usize)>) {
    let n = r.random_range(2..8);
    let mut ts = TripleSet::default();
    let labels: Vec<String> = (0..n)
        .map(|_| {
            if r.random_bool(0.3) {
                format!("{} {}", WORDS.choose(r).unwrap(), WORDS.choose(r).unwrap())
            } else {
                WORDS.choose(r).unwrap().to_string()
            }
        })
        .collect();
    for (i, l) in labels.iter().enumerate() {
        ts.insert(Triple::new(node(i), iri(RDFS_LABEL), Literal::plain(l.clone())));
    }
    let mut edges = BTreeSet::new();
    for a in 0..n {
        for b in a + 1..n {
            if r.random_bool(0.3) {
                ts.insert(Triple::new(node(a), iri(RDFS_SUBCLASS_OF), node(b)));
                edges.insert((a, b));
            }
        }
    }
    (build_ontology(ts), labels, edges)
}

fn oracle_fit(docs: &[(String, String)], labels: &[String], edges: &BTreeSet<(usize, usize)>, window: usize) -> (usize, usize) {
    let toks: Vec<Vec<String>> = docs.iter().map(|(_, t)| oracle_tokens(t)).collect();
    let starts = |d: &[String], l: &[String]| -> Vec<usize> {
        (0..d.len()).filter(|&i| i + l.len() <= d.len() && d[i..i + l.len()] == *l).collect()
    };
    let present = |l: &[String]| toks.iter().any(|d| !starts(d, l).is_empty());
    let (mut considered, mut fit) = (0, 0);
    for &(a, b) in edges {
        let (la, lb) = (oracle_tokens(&labels[a]), oracle_tokens(&labels[b]));
        if !present(&la) || !present(&lb) {
            continue;
        }
        considered += 1;
        let hit = toks.iter().any(|d| {
            starts(d, &la).iter().any(|&i| {
                starts(d, &lb).iter().any(|&j| (i + la.len()).max(j + lb.len()) - i.min(j) <= window)
            })
        });
        fit += usize::from(hit);
    }
    (fit, considered)
}

#[test]
fn structural_fit_matches_oracle() {
    for seed in 0..100 {
        let mut r = rng(300 + seed);
        let (g, labels, edges) = random_taxonomy(&mut r);
        let n = r.random_range(1..5);
        let docs = random_docs(&mut r, n);
        let c = ingest_corpus(&docs).unwrap();
        if c.total_tokens == 0 {
            continue;
        }
        let window = r.random_range(2..8);
        let m = structural_fit(&g, &c, window).unwrap();
        let (fit, considered) = oracle_fit(&docs, &labels, &edges, window);
        let expected = if considered == 0 { 1.0 } else { fit as f64 / considered as f64 };
        assert!((m.value - expected).abs() < 1e-12, "seed {seed}: {} vs {fit}/{considered}", m.value);
        assert_eq!(m.degenerate, considered == 0);
    }
}

#[test]
fn coverage_is_monotone_in_documents() {
    for seed in 0..50 {
        let mut r = rng(600 + seed);
        let (g, _, _) = random_taxonomy(&mut r);
        let mut docs = random_docs(&mut r, 3);
        docs[0].1.push_str(" crop");
        let mut prev = 0.0;
        for extra in 0..4 {
            let c = ingest_corpus(&docs).unwrap();
            let [coverage, focus] = lexical_coverage(&g, &c, 20).unwrap();
            assert!(coverage.value >= prev - 1e-12, "seed {seed} step {extra}");
            assert!((0.0..=1.0).contains(&focus.value));
            prev = coverage.value;
            docs.extend(random_docs(&mut r, 1).into_iter().map(|(_, t)| (format!("x{extra}.txt"), t)));
        }
    }
}

#[test]
fn coverage_hand_example() {
    let ts: TripleSet = [
        Triple::new(node(0), iri(RDFS_LABEL), Literal::plain("Aphid")),
        Triple::new(node(1), iri(RDFS_LABEL), Literal::plain("Spider mite")),
        Triple::new(node(2), iri(RDFS_LABEL), Literal::plain("Whitefly")),
        Triple::new(node(3), iri(RDFS_LABEL), Literal::plain("crop")),
    ]
    .into_iter()
    .chain((0..4).map(|i| Triple::new(node(i), iri(RDF_TYPE), iri(OWL_CLASS))))
    .collect();
    let g = build_ontology(ts);
    let c = ingest_corpus(&[("a".into(), "aphids and the spider mite attack a crop".into())]).unwrap();
    let [coverage, _] = lexical_coverage(&g, &c, 50).unwrap();
    // spider mite and crop; "aphids" is not "aphid"
    assert_eq!(coverage.value, 0.5);
}

#[test]
fn corpus_directory_reads_txt_files_in_name_order() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("b.txt"), "mite mite").unwrap();
    std::fs::write(dir.path().join("a.txt"), "aphid").unwrap();
    std::fs::write(dir.path().join("notes.md"), "ignored").unwrap();
    let c = onteval_core::corpus::load_corpus_dir(dir.path(), Execution::Sequential).unwrap();
    let ids: Vec<&str> = c.documents.iter().map(|d| d.doc_id.as_str()).collect();
    assert_eq!(ids, ["a.txt", "b.txt"]);
    assert_eq!(c.total_tokens, 3);
    assert_eq!(c, ingest_corpus(&[("a.txt".into(), "aphid".into()), ("b.txt".into(), "mite mite".into())]).unwrap());
}
