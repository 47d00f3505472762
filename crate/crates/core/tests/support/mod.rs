//! Random instance generators and brute-force oracles shared by the
//! integration tests and the acceptance suite.
#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use onteval_core::context::{Bindings, PatternTerm, Rule, TriplePattern};
use onteval_core::rdf::vocab::{OWL_DISJOINT_WITH, OWL_SAME_AS, RDFS_DOMAIN, RDFS_RANGE, RDFS_SUBCLASS_OF, RDF_TYPE};
use onteval_core::rdf::{build_ontology, Iri, Literal, OntologyGraph, Term, Triple, TripleSet};
use rand::rngs::StdRng;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn iri(s: &str) -> Iri {
    Iri::new(s).unwrap()
}

pub fn node(i: usize) -> Iri {
    iri(&format!("http://t/n{i:02}"))
}

pub fn prop(k: usize) -> Iri {
    iri(&format!("http://t/p{k}"))
}

// ---------------------------------------------------------------------------
// Schema graphs for the criteria metrics
// ---------------------------------------------------------------------------

/// A small schema graph over integer node ids, kept alongside its triples so
/// oracles never look at the indexed graph.
#[derive(Debug, Clone, Default)]
pub struct RawGraph {
    pub n: usize,
    pub sub: BTreeSet<(usize, usize)>,
    pub disjoint: BTreeSet<(usize, usize)>,
    pub types: BTreeSet<(usize, usize)>,
    pub domain: BTreeSet<(usize, usize)>,
    pub range: BTreeSet<(usize, usize)>,
    pub uses: BTreeSet<(usize, usize, usize)>,
    pub props: usize,
}

impl RawGraph {
    pub fn random(r: &mut StdRng, acyclic: bool) -> Self {
        let n = r.random_range(2..=12);
        let props = 3;
        let mut g = RawGraph { n, props, ..Default::default() };
        for a in 0..n {
            for b in 0..n {
                let allowed = if acyclic { a < b } else { true };
                let p = if a == b { 0.02 } else { 0.12 };
                if allowed && r.random_bool(p) {
                    g.sub.insert((a, b));
                }
                if a < b && r.random_bool(0.06) {
                    g.disjoint.insert((a, b));
                }
                if a != b && r.random_bool(0.05) {
                    g.types.insert((a, b));
                }
            }
        }
        for p in 0..props {
            for _ in 0..r.random_range(0..=2) {
                g.domain.insert((p, r.random_range(0..n)));
            }
            for _ in 0..r.random_range(0..=2) {
                g.range.insert((p, r.random_range(0..n)));
            }
        }
        for _ in 0..r.random_range(0..=6) {
            g.uses.insert((r.random_range(0..n), r.random_range(0..props), r.random_range(0..n)));
        }
        g
    }

    pub fn triples(&self) -> TripleSet {
        let mut ts = TripleSet::default();
        let (sub, disj, ty, dom, ran) = (iri(RDFS_SUBCLASS_OF), iri(OWL_DISJOINT_WITH), iri(RDF_TYPE), iri(RDFS_DOMAIN), iri(RDFS_RANGE));
        for &(a, b) in &self.sub {
            ts.insert(Triple::new(node(a), sub.clone(), node(b)));
        }
        for &(a, b) in &self.disjoint {
            ts.insert(Triple::new(node(a), disj.clone(), node(b)));
        }
        for &(a, b) in &self.types {
            ts.insert(Triple::new(node(a), ty.clone(), node(b)));
        }
        for &(p, c) in &self.domain {
            ts.insert(Triple::new(prop(p), dom.clone(), node(c)));
        }
        for &(p, c) in &self.range {
            ts.insert(Triple::new(prop(p), ran.clone(), node(c)));
        }
        for &(s, p, o) in &self.uses {
            ts.insert(Triple::new(node(s), prop(p), node(o)));
        }
        ts
    }

    pub fn graph(&self) -> OntologyGraph {
        build_ontology(self.triples())
    }

    /// reach[a][b]: a path of one or more subclass edges from a to b.
    pub fn reach(&self) -> Vec<Vec<bool>> {
        let mut m = vec![vec![false; self.n]; self.n];
        for &(a, b) in &self.sub {
            m[a][b] = true;
        }
        for k in 0..self.n {
            for i in 0..self.n {
                for j in 0..self.n {
                    if m[i][k] && m[k][j] {
                        m[i][j] = true;
                    }
                }
            }
        }
        m
    }

    fn reach_or_self(&self) -> Vec<Vec<bool>> {
        let mut m = self.reach();
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = true;
        }
        m
    }

    pub fn is_acyclic(&self) -> bool {
        let m = self.reach();
        (0..self.n).all(|i| !m[i][i])
    }

    fn disjoint_sym(&self, a: usize, b: usize) -> bool {
        a != b && (self.disjoint.contains(&(a, b)) || self.disjoint.contains(&(b, a)))
    }

    fn types_of(&self, i: usize) -> Vec<usize> {
        self.types.iter().filter(|(x, _)| *x == i).map(|&(_, t)| t).collect()
    }
}

pub fn oracle_circularity(g: &RawGraph) -> usize {
    let m = g.reach();
    let comps: BTreeSet<Vec<usize>> = (0..g.n).filter(|&u| m[u][u]).map(|u| (0..g.n).filter(|&v| m[u][v] && m[v][u]).collect()).collect();
    comps.len()
}

pub fn oracle_partition(g: &RawGraph) -> usize {
    let rs = g.reach_or_self();
    let mut total = 0;
    for &(b, c) in &g.disjoint {
        if b == c {
            continue;
        }
        let mut violators = BTreeSet::new();
        for e in 0..g.n {
            if rs[e][b] && rs[e][c] {
                violators.insert(e);
            }
            let ts = g.types_of(e);
            if ts.iter().any(|&t| rs[t][b]) && ts.iter().any(|&t| rs[t][c]) {
                violators.insert(e);
            }
        }
        total += violators.len();
    }
    total
}

pub fn oracle_semantic_inconsistency(g: &RawGraph) -> usize {
    let rs = g.reach_or_self();
    let clash = |declared: usize, t: usize| (0..g.n).any(|x| rs[declared][x] && (0..g.n).any(|y| rs[t][y] && g.disjoint_sym(x, y)));
    let conflict = |node: usize, decls: Vec<usize>| g.types_of(node).iter().any(|&t| decls.iter().any(|&d| clash(d, t)));
    g.uses
        .iter()
        .filter(|&&(s, p, o)| {
            let doms: Vec<usize> = g.domain.iter().filter(|(q, _)| *q == p).map(|&(_, c)| c).collect();
            let rans: Vec<usize> = g.range.iter().filter(|(q, _)| *q == p).map(|&(_, c)| c).collect();
            conflict(s, doms) || conflict(o, rans)
        })
        .count()
}

/// `None` when the hierarchy is cyclic.
pub fn oracle_redundancy(g: &RawGraph) -> Option<usize> {
    if !g.is_acyclic() {
        return None;
    }
    let reachable_without = |skip: (usize, usize)| {
        let mut seen = vec![false; g.n];
        let mut q = VecDeque::from([skip.0]);
        while let Some(u) = q.pop_front() {
            for &(a, b) in &g.sub {
                if a == u && (a, b) != skip && !seen[b] {
                    seen[b] = true;
                    q.push_back(b);
                }
            }
        }
        seen[skip.1]
    };
    let edges = g.sub.iter().filter(|&&e| reachable_without(e)).count();
    let m = g.reach();
    let types = g.types.iter().filter(|&&(i, t)| g.types_of(i).iter().any(|&o| o != t && m[o][t])).count();
    Some(edges + types)
}

pub fn oracle_identical_definitions(g: &RawGraph) -> usize {
    let sig = |c: usize| {
        let parents: BTreeSet<usize> = g.sub.iter().filter(|(a, _)| *a == c).map(|&(_, b)| b).collect();
        let dom: BTreeSet<usize> = g.domain.iter().filter(|(_, d)| *d == c).map(|&(p, _)| p).collect();
        let disj: BTreeSet<usize> = (0..g.n).filter(|&x| g.disjoint_sym(c, x)).collect();
        (parents, dom, disj)
    };
    let sigs: Vec<_> = (0..g.n).map(sig).collect();
    let mut count = 0;
    for a in 0..g.n {
        for b in a + 1..g.n {
            let empty = sigs[a].0.is_empty() && sigs[a].1.is_empty() && sigs[a].2.is_empty();
            if !empty && sigs[a] == sigs[b] {
                count += 1;
            }
        }
    }
    count
}

// ---------------------------------------------------------------------------
// Triples, queries and rules
// ---------------------------------------------------------------------------

pub fn random_term(r: &mut StdRng, pool: usize) -> Term {
    if r.random_bool(0.15) {
        Term::Literal(Literal::plain(format!("l{}", r.random_range(0..2))))
    } else {
        Term::Iri(node(r.random_range(0..pool)))
    }
}

/// Up to `max` triples over a small vocabulary so joins actually hit.
pub fn random_small_triples(r: &mut StdRng, max: usize, predicates: &[Iri]) -> TripleSet {
    let mut ts = TripleSet::default();
    for _ in 0..r.random_range(0..=max) {
        let s = node(r.random_range(0..4));
        let p = predicates.choose(r).unwrap().clone();
        ts.insert(Triple::new(s, p, random_term(r, 4)));
    }
    ts
}

pub fn random_pattern_term(r: &mut StdRng, vars: &[&str], consts: &[Term]) -> PatternTerm {
    if r.random_bool(0.55) {
        PatternTerm::var(vars.choose(r).unwrap())
    } else {
        PatternTerm::Const(consts.choose(r).unwrap().clone())
    }
}

pub fn random_query_patterns(r: &mut StdRng, predicates: &[Iri]) -> Vec<TriplePattern> {
    let vars = ["x", "y", "z"];
    let subjects: Vec<Term> = (0..4).map(|i| Term::Iri(node(i))).collect();
    let preds: Vec<Term> = predicates.iter().cloned().map(Term::Iri).collect();
    let mut objects = subjects.clone();
    objects.push(Term::Literal(Literal::plain("l0")));
    (0..r.random_range(1..=3))
        .map(|_| {
            TriplePattern::new(
                random_pattern_term(r, &vars, &subjects),
                random_pattern_term(r, &vars, &preds),
                random_pattern_term(r, &vars, &objects),
            )
        })
        .collect()
}

fn ground(p: &PatternTerm, a: &BTreeMap<String, Term>) -> Term {
    match p {
        PatternTerm::Var(v) => a[v].clone(),
        PatternTerm::Const(t) => t.clone(),
    }
}

fn as_triple(s: Term, p: Term, o: Term) -> Option<Triple> {
    Some(Triple::new(s.as_iri()?.clone(), p.as_iri()?.clone(), o))
}

/// Every assignment of every variable to every term in the universe, kept
/// when all patterns become asserted triples.
pub fn oracle_query(ts: &TripleSet, patterns: &[TriplePattern], projection: &[String]) -> BTreeSet<Bindings> {
    let mut universe: BTreeSet<Term> = BTreeSet::new();
    for t in ts.iter() {
        universe.insert(Term::Iri(t.subject.clone()));
        universe.insert(Term::Iri(t.predicate.clone()));
        universe.insert(t.object.clone());
    }
    for p in patterns {
        for pt in p.positions() {
            if let PatternTerm::Const(c) = pt {
                universe.insert(c.clone());
            }
        }
    }
    let universe: Vec<Term> = universe.into_iter().collect();
    let vars: Vec<String> = patterns.iter().flat_map(|p| p.variables().map(str::to_string)).collect::<BTreeSet<_>>().into_iter().collect();
    let mut out = BTreeSet::new();
    let total = universe.len().pow(vars.len() as u32);
    for mut code in 0..total {
        let mut a = BTreeMap::new();
        for v in &vars {
            a.insert(v.clone(), universe[code % universe.len()].clone());
            code /= universe.len();
        }
        let ok = patterns.iter().all(|p| {
            as_triple(ground(&p.subject, &a), ground(&p.predicate, &a), ground(&p.object, &a)).is_some_and(|t| ts.contains(&t))
        });
        if ok {
            out.insert(projection.iter().map(|v| (v.clone(), a[v].clone())).collect());
        }
    }
    out
}

/// Backtracking over the full triple list for each body pattern in turn.
fn naive_matches(ts: &[Triple], body: &[TriplePattern], a: BTreeMap<String, Term>, out: &mut Vec<BTreeMap<String, Term>>) {
    let Some((first, rest)) = body.split_first() else {
        out.push(a);
        return;
    };
    for t in ts {
        let vals = [Term::Iri(t.subject.clone()), Term::Iri(t.predicate.clone()), t.object.clone()];
        let mut b = a.clone();
        let mut ok = true;
        for (pt, v) in first.positions().into_iter().zip(vals) {
            match pt {
                PatternTerm::Const(c) => ok &= *c == v,
                PatternTerm::Var(name) => match b.get(name) {
                    Some(x) => ok &= *x == v,
                    None => {
                        b.insert(name.clone(), v);
                    }
                },
            }
        }
        if ok {
            naive_matches(ts, rest, b, out);
        }
    }
}

fn p(s: &str, pr: &str, o: &str) -> TriplePattern {
    TriplePattern::new(s.parse().unwrap(), pr.parse().unwrap(), o.parse().unwrap())
}

/// Entailment rules written out independently of the engine's own list.
pub fn oracle_builtin_rules() -> Vec<(Vec<TriplePattern>, TriplePattern)> {
    let (sub, ty, same) = (RDFS_SUBCLASS_OF, RDF_TYPE, OWL_SAME_AS);
    vec![
        (vec![p("?a", sub, "?b"), p("?b", sub, "?c")], p("?a", sub, "?c")),
        (vec![p("?i", ty, "?a"), p("?a", sub, "?b")], p("?i", ty, "?b")),
        (vec![p("?x", same, "?y")], p("?y", same, "?x")),
        (vec![p("?x", same, "?y"), p("?y", same, "?z")], p("?x", same, "?z")),
        (vec![p("?x", same, "?y"), p("?x", "?p", "?o")], p("?y", "?p", "?o")),
        (vec![p("?x", same, "?y"), p("?s", "?x", "?o")], p("?s", "?y", "?o")),
        (vec![p("?x", same, "?y"), p("?s", "?p", "?x")], p("?s", "?p", "?y")),
    ]
}

/// Naive fixpoint: apply every rule to the whole set until nothing changes.
pub fn oracle_closure(ts: &TripleSet, rules: &[Rule]) -> BTreeSet<Triple> {
    let mut all: Vec<(Vec<TriplePattern>, TriplePattern)> = oracle_builtin_rules();
    all.extend(rules.iter().map(|r| (r.body().to_vec(), r.head().clone())));
    let mut set: BTreeSet<Triple> = ts.iter().cloned().collect();
    loop {
        let list: Vec<Triple> = set.iter().cloned().collect();
        let mut added = false;
        for (body, head) in &all {
            let mut rows = Vec::new();
            naive_matches(&list, body, BTreeMap::new(), &mut rows);
            for a in rows {
                let t = as_triple(ground(&head.subject, &a), ground(&head.predicate, &a), ground(&head.object, &a));
                if let Some(t) = t.filter(|t| !t.predicate.is_blank()) {
                    added |= set.insert(t);
                }
            }
        }
        if !added {
            return set;
        }
    }
}

pub fn random_rules(r: &mut StdRng, predicates: &[Iri]) -> Vec<Rule> {
    let vars = ["a", "b", "c"];
    let mut out = Vec::new();
    for k in 0..r.random_range(0..=2) {
        let body: Vec<TriplePattern> = (0..r.random_range(1..=2))
            .map(|_| {
                TriplePattern::new(
                    PatternTerm::var(vars.choose(r).unwrap()),
                    PatternTerm::Const(Term::Iri(predicates.choose(r).unwrap().clone())),
                    PatternTerm::var(vars.choose(r).unwrap()),
                )
            })
            .collect();
        let bound: Vec<String> = body.iter().flat_map(|b| b.variables().map(str::to_string)).collect();
        let head = TriplePattern::new(
            PatternTerm::Var(bound.choose(r).unwrap().clone()),
            PatternTerm::Const(Term::Iri(predicates.choose(r).unwrap().clone())),
            PatternTerm::Var(bound.choose(r).unwrap().clone()),
        );
        out.push(Rule::new(format!("r{k}"), body, head).unwrap());
    }
    out
}

pub fn closure_predicates() -> Vec<Iri> {
    vec![iri(RDFS_SUBCLASS_OF), iri(RDF_TYPE), iri(OWL_SAME_AS), prop(0), prop(1)]
}

// ---------------------------------------------------------------------------
// Alignment
// ---------------------------------------------------------------------------

pub fn oracle_levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut d = vec![vec![0usize; b.len() + 1]; a.len() + 1];
    for (i, row) in d.iter_mut().enumerate() {
        row[0] = i;
    }
    for j in 0..=b.len() {
        d[0][j] = j;
    }
    for i in 1..=a.len() {
        for j in 1..=b.len() {
            let cost = usize::from(a[i - 1] != b[j - 1]);
            d[i][j] = (d[i - 1][j] + 1).min(d[i][j - 1] + 1).min(d[i - 1][j - 1] + cost);
        }
    }
    d[a.len()][b.len()]
}

fn norm(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase()
}

pub fn oracle_similarity(a: &str, b: &str) -> f64 {
    let (a, b) = (norm(a), norm(b));
    let max = a.chars().count().max(b.chars().count());
    if max == 0 {
        1.0
    } else {
        1.0 - oracle_levenshtein(&a, &b) as f64 / max as f64
    }
}

/// Entities labelled from a tiny alphabet so near-ties are common.
pub fn random_labelled_graph(r: &mut StdRng, ns: &str, max: usize) -> (OntologyGraph, BTreeMap<Iri, Vec<String>>) {
    let alphabet = ['a', 'b', 'c'];
    let mut ts = TripleSet::default();
    let mut labels = BTreeMap::new();
    for i in 0..r.random_range(0..=max) {
        let e = iri(&format!("http://{ns}/e{i}"));
        ts.insert(Triple::new(e.clone(), iri(RDF_TYPE), iri("http://www.w3.org/2002/07/owl#Class")));
        let mut ls = Vec::new();
        for _ in 0..r.random_range(1..=2) {
            let len = r.random_range(1..=4);
            let l: String = (0..len).map(|_| *alphabet.choose(r).unwrap()).collect();
            ts.insert(Triple::new(e.clone(), iri(onteval_core::rdf::vocab::RDFS_LABEL), Literal::plain(l.clone())));
            ls.push(l);
        }
        ls.sort();
        ls.dedup();
        labels.insert(e, ls);
    }
    (build_ontology(ts), labels)
}

/// Greedy replay: all pairs at or above the threshold, best first, ties by
/// (candidate, gold) IRI order, each entity used at most once.
pub fn oracle_greedy(c: &BTreeMap<Iri, Vec<String>>, g: &BTreeMap<Iri, Vec<String>>, threshold: f64) -> Vec<(Iri, Iri, f64)> {
    let mut all = Vec::new();
    for (ci, cl) in c {
        for (gi, gl) in g {
            let best = cl.iter().flat_map(|a| gl.iter().map(move |b| oracle_similarity(a, b))).fold(f64::MIN, f64::max);
            if best >= threshold {
                all.push((ci.clone(), gi.clone(), best));
            }
        }
    }
    all.sort_by(|x, y| y.2.partial_cmp(&x.2).unwrap().then_with(|| x.0.cmp(&y.0)).then_with(|| x.1.cmp(&y.1)));
    let mut used_c = HashSet::new();
    let mut used_g = HashSet::new();
    all.into_iter().filter(|(a, b, _)| !used_c.contains(a) && !used_g.contains(b) && used_c.insert(a.clone()) && used_g.insert(b.clone())).collect()
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

use onteval_core::context::{ContextReport, TaskOutcome};
use onteval_core::framework::{build_plan, Level, Method, Purpose, ResourceFlags};
use onteval_core::report::{FileSyntax, LevelStatus, Report, Skipped};
use onteval_core::syntactic::{Severity, SyntacticReport, SyntaxIssue};
use onteval_core::{Finding, FindingKind, MetricResult};

const KINDS: [FindingKind; 6] = [
    FindingKind::CircularityError,
    FindingKind::PartitionError,
    FindingKind::SemanticInconsistencyError,
    FindingKind::RedundancyError,
    FindingKind::GrammaticalRedundancyError,
    FindingKind::IdenticalDefinition,
];

fn awkward_text(r: &mut StdRng) -> String {
    let parts = ["aphid", "\"quoted\"", "tab\there", "line\nbreak", "ünï", "🌱", "back\\slash", "", " "];
    (0..r.random_range(0..4)).map(|_| *parts.choose(r).unwrap()).collect::<Vec<_>>().join(" ")
}

fn awkward_float(r: &mut StdRng) -> f64 {
    match r.random_range(0..6) {
        0 => 0.0,
        1 => 1.0,
        2 => 0.1 + 0.2,
        3 => f64::MIN_POSITIVE * r.random::<f64>(),
        4 => r.random::<f64>() * 1e12,
        _ => r.random::<f64>(),
    }
}

fn random_metric(r: &mut StdRng) -> MetricResult {
    let level = *Level::ALL.choose(r).unwrap();
    let method = *Method::ALL.choose(r).unwrap();
    let mut m = if r.random_bool(0.5) {
        let findings = (0..r.random_range(0..4))
            .map(|_| Finding::new(*KINDS.choose(r).unwrap(), (0..r.random_range(1..3)).map(node).collect(), awkward_text(r)))
            .collect();
        MetricResult::count("count_metric", findings, level, &awkward_text(r), r.random_range(0..10_000))
    } else {
        MetricResult::ratio("ratio_metric", awkward_float(r), level, method, &awkward_text(r))
    };
    m = m.degenerate(r.random_bool(0.2));
    if r.random_bool(0.3) {
        m = m.with_notes(vec![awkward_text(r), awkward_text(r)]);
    }
    m
}

fn random_issue(r: &mut StdRng) -> SyntaxIssue {
    SyntaxIssue {
        severity: if r.random_bool(0.5) { Severity::Error } else { Severity::Warning },
        code: ["PARSE_ERROR", "MISSING_LABEL", "RELATIVE_IRI"].choose(r).unwrap().to_string(),
        subject: r.random_bool(0.5).then(|| node(r.random_range(0..5))),
        message: awkward_text(r),
        line: r.random_bool(0.5).then(|| r.random_range(1..100)),
        column: r.random_bool(0.5).then(|| r.random_range(1..100)),
    }
}

fn random_context(r: &mut StdRng) -> ContextReport {
    let per_task: Vec<TaskOutcome> = (0..r.random_range(0..4))
        .map(|i| TaskOutcome {
            task_id: format!("t{i}"),
            description: awkward_text(r),
            require_inference: r.random_bool(0.5),
            passed: r.random_bool(0.5),
            actual_bindings: (0..r.random_range(0..3))
                .map(|_| [("x".to_string(), random_term(r, 4)), ("y".to_string(), Term::Literal(Literal::lang(awkward_text(r), "en")))].into_iter().collect())
                .collect(),
            reason: r.random_bool(0.5).then(|| awkward_text(r)),
            elapsed_ms: awkward_float(r),
        })
        .collect();
    let passed = per_task.iter().filter(|t| t.passed).count();
    let pass_rate = if per_task.is_empty() { 1.0 } else { passed as f64 / per_task.len() as f64 };
    ContextReport { degenerate: per_task.is_empty(), per_task, pass_rate }
}

pub fn random_report(r: &mut StdRng) -> Report {
    let purposes: BTreeSet<Purpose> = loop {
        let s: BTreeSet<Purpose> = Purpose::ALL.iter().copied().filter(|_| r.random_bool(0.5)).collect();
        if !s.is_empty() {
            break s;
        }
    };
    let flags = ResourceFlags {
        gold_standard_available: r.random_bool(0.5),
        corpus_available: r.random_bool(0.5),
        application_available: r.random_bool(0.5),
        built_from_data_sources: r.random_bool(0.5),
    };
    let plan = build_plan(&purposes, flags, &[]).unwrap();
    let summary = plan
        .selected_levels()
        .into_iter()
        .map(|l| {
            let s = match r.random_range(0..3) {
                0 => LevelStatus::Pass,
                1 => LevelStatus::Findings,
                _ => LevelStatus::Skipped { reason: awkward_text(r) },
            };
            (l, s)
        })
        .collect();
    Report {
        tool_version: "onteval test".into(),
        plan,
        results: (0..r.random_range(0..6)).map(|_| random_metric(r)).collect(),
        syntactic: (0..r.random_range(0..3))
            .map(|i| FileSyntax {
                path: format!("dir/o{i}.ttl"),
                report: SyntacticReport { parse_ok: r.random_bool(0.7), issues: (0..r.random_range(0..3)).map(|_| random_issue(r)).collect() },
            })
            .collect(),
        context: r.random_bool(0.5).then(|| random_context(r)),
        summary,
        skipped: (0..r.random_range(0..3))
            .map(|_| Skipped {
                level: *Level::ALL.choose(r).unwrap(),
                method: *Method::ALL.choose(r).unwrap(),
                metric: r.random_bool(0.5).then(|| "m".to_string()),
                reason: awkward_text(r),
            })
            .collect(),
        input_digests: (0..r.random_range(0..3)).map(|i| (format!("f{i}"), format!("{:064x}", r.random::<u128>()))).collect(),
    }
}

// ---------------------------------------------------------------------------
// Arbitrary triples for round-trips
// ---------------------------------------------------------------------------

const LEXICAL_CHARS: &[char] = &['a', 'Z', '0', ' ', '"', '\\', '\n', '\r', '\t', 'é', '漢', '🌱', '\'', '<', '>', '#', '.', '@'];

pub fn random_iri(r: &mut StdRng) -> Iri {
    if r.random_bool(0.1) {
        Iri::blank(&format!("b{}", r.random_range(0..5))).unwrap()
    } else {
        let path: String = (0..r.random_range(1..6)).map(|_| *['a', 'b', '/', '#', '-', '%', 'é'].choose(r).unwrap()).collect();
        iri(&format!("http://ex.org/{path}"))
    }
}

pub fn random_object(r: &mut StdRng) -> Term {
    if r.random_bool(0.5) {
        return Term::Iri(random_iri(r));
    }
    let lexical: String = (0..r.random_range(0..8)).map(|_| *LEXICAL_CHARS.choose(r).unwrap()).collect();
    Term::Literal(match r.random_range(0..3) {
        0 => Literal::plain(lexical),
        1 => Literal::lang(lexical, ["en", "de-CH", "fr"].choose(r).unwrap().to_string()),
        _ => Literal::typed(lexical, iri("http://www.w3.org/2001/XMLSchema#string")),
    })
}

pub fn random_set(r: &mut StdRng, n: usize) -> TripleSet {
    let mut ts = TripleSet::default();
    for _ in 0..n {
        let s = random_iri(r);
        let p = loop {
            let p = random_iri(r);
            if !p.is_blank() {
                break p;
            }
        };
        ts.insert(Triple::new(s, p, random_object(r)));
    }
    ts
}
