//! Semi-naive evaluation over interned terms. Rules are compiled to slot
//! patterns and rows are dense vectors of term ids.

use std::collections::{HashMap, HashSet};

use super::pattern::{PatternTerm, TriplePattern};
use super::rules::Rule;
use super::ContextError;
use crate::rdf::{Term, Triple, TripleSet};

type Id = u32;
type Key = [Id; 3];

#[derive(Default)]
struct Interner {
    ids: HashMap<Term, Id>,
    terms: Vec<Term>,
    /// Usable as a subject.
    iri: Vec<bool>,
    /// Usable as a predicate.
    named_iri: Vec<bool>,
}

impl Interner {
    fn id(&mut self, t: &Term) -> Id {
        if let Some(&i) = self.ids.get(t) {
            return i;
        }
        let i = self.terms.len() as Id;
        let iri = t.as_iri();
        self.iri.push(iri.is_some());
        self.named_iri.push(iri.is_some_and(|x| !x.is_blank()));
        self.terms.push(t.clone());
        self.ids.insert(t.clone(), i);
        i
    }

    fn key(&mut self, t: &Triple) -> Key {
        [self.id(&Term::Iri(t.subject.clone())), self.id(&Term::Iri(t.predicate.clone())), self.id(&t.object)]
    }

    fn triple(&self, k: Key) -> Triple {
        let iri = |i: Id| self.terms[i as usize].as_iri().expect("checked on derivation").clone();
        Triple::new(iri(k[0]), iri(k[1]), self.terms[k[2] as usize].clone())
    }
}

#[derive(Clone, Copy)]
enum Slot {
    Const(Id),
    Var(usize),
}

struct Compiled {
    body: Vec<[Slot; 3]>,
    head: [Slot; 3],
    vars: usize,
}

fn compile(r: &Rule, terms: &mut Interner) -> Compiled {
    let mut names: Vec<String> = Vec::new();
    let mut slot = |p: &PatternTerm, terms: &mut Interner| match p {
        PatternTerm::Const(t) => Slot::Const(terms.id(t)),
        PatternTerm::Var(v) => Slot::Var(names.iter().position(|n| n == v).unwrap_or_else(|| {
            names.push(v.clone());
            names.len() - 1
        })),
    };
    let mut pattern = |p: &TriplePattern, terms: &mut Interner| [slot(&p.subject, terms), slot(&p.predicate, terms), slot(&p.object, terms)];
    let body: Vec<[Slot; 3]> = r.body().iter().map(|p| pattern(p, terms)).collect();
    let head = pattern(r.head(), terms);
    Compiled { body, head, vars: names.len() }
}

#[derive(Default)]
struct Index {
    seen: HashSet<Key>,
    keys: Vec<Key>,
    by: [HashMap<Id, Vec<u32>>; 3],
}

impl Index {
    fn insert(&mut self, k: Key) -> bool {
        if !self.seen.insert(k) {
            return false;
        }
        let i = self.keys.len() as u32;
        for (pos, map) in self.by.iter_mut().enumerate() {
            map.entry(k[pos]).or_default().push(i);
        }
        self.keys.push(k);
        true
    }

    /// Calls `f` with each row extending `row` so that `p` matches a stored triple.
    fn each_match(&self, p: &[Slot; 3], row: &[Option<Id>], mut f: impl FnMut(Vec<Option<Id>>)) {
        let bound = |s: Slot| match s {
            Slot::Const(c) => Some(c),
            Slot::Var(v) => row[v],
        };
        let mut best: Option<&[u32]> = None;
        for (pos, s) in p.iter().enumerate() {
            if let Some(v) = bound(*s) {
                let list = self.by[pos].get(&v).map_or(&[][..], Vec::as_slice);
                if best.is_none_or(|b| list.len() < b.len()) {
                    best = Some(list);
                }
            }
        }
        let mut visit = |k: &Key| {
            let mut out = row.to_vec();
            for (pos, s) in p.iter().enumerate() {
                match *s {
                    Slot::Const(c) if c != k[pos] => return,
                    Slot::Const(_) => {}
                    Slot::Var(v) => match out[v] {
                        Some(x) if x != k[pos] => return,
                        Some(_) => {}
                        None => out[v] = Some(k[pos]),
                    },
                }
            }
            f(out);
        };
        match best {
            Some(list) => list.iter().for_each(|&i| visit(&self.keys[i as usize])),
            None => self.keys.iter().for_each(&mut visit),
        }
    }

    fn may_match(&self, p: &[Slot; 3], vars: usize) -> bool {
        let mut any = false;
        self.each_match(p, &vec![None; vars], |_| any = true);
        any
    }
}

/// Joins the remaining patterns, most-bound first.
fn join(index: &Index, patterns: &[&[Slot; 3]], rows: Vec<Vec<Option<Id>>>) -> Vec<Vec<Option<Id>>> {
    let mut rows = rows;
    let mut remaining: Vec<&[Slot; 3]> = patterns.to_vec();
    while !remaining.is_empty() && !rows.is_empty() {
        let first = &rows[0];
        let score = |p: &[Slot; 3]| p.iter().filter(|s| matches!(s, Slot::Const(_)) || matches!(s, Slot::Var(v) if first[*v].is_some())).count();
        let (pick, _) = remaining.iter().enumerate().max_by_key(|(i, p)| (score(p), std::cmp::Reverse(*i))).expect("non-empty");
        let p = remaining.remove(pick);
        let mut next = Vec::new();
        for r in &rows {
            index.each_match(p, r, |out| next.push(out));
        }
        rows = next;
    }
    rows
}

fn instantiate(head: &[Slot; 3], row: &[Option<Id>], terms: &Interner) -> Option<Key> {
    let get = |s: Slot| match s {
        Slot::Const(c) => Some(c),
        Slot::Var(v) => row[v],
    };
    let k = [get(head[0])?, get(head[1])?, get(head[2])?];
    (terms.iri[k[0] as usize] && terms.named_iri[k[1] as usize]).then_some(k)
}

pub(crate) fn closure(input: &TripleSet, rules: &[Rule], cap: usize) -> Result<TripleSet, ContextError> {
    let mut terms = Interner::default();
    let compiled: Vec<Compiled> = rules.iter().map(|r| compile(r, &mut terms)).collect();
    let mut index = Index::default();
    let mut delta: Vec<Key> = Vec::new();
    for t in input.iter() {
        let k = terms.key(t);
        if index.insert(k) {
            delta.push(k);
        }
    }
    let mut derived = 0usize;
    while !delta.is_empty() {
        let mut delta_index = Index::default();
        for &k in &delta {
            delta_index.insert(k);
        }
        let mut fresh: HashSet<Key> = HashSet::new();
        for r in &compiled {
            if !r.body.iter().all(|p| index.may_match(p, r.vars)) {
                continue;
            }
            for (i, first) in r.body.iter().enumerate() {
                let mut seeds = Vec::new();
                delta_index.each_match(first, &vec![None; r.vars], |row| seeds.push(row));
                if seeds.is_empty() {
                    continue;
                }
                let rest: Vec<&[Slot; 3]> = r.body.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, p)| p).collect();
                for row in join(&index, &rest, seeds) {
                    if let Some(k) = instantiate(&r.head, &row, &terms) {
                        if !index.seen.contains(&k) {
                            fresh.insert(k);
                        }
                    }
                }
                if derived + fresh.len() > cap {
                    return Err(ContextError::FixpointOverflow { cap });
                }
            }
        }
        derived += fresh.len();
        delta = fresh.into_iter().collect();
        delta.sort_unstable();
        for &k in &delta {
            index.insert(k);
        }
    }
    let mut out = TripleSet::new(input.source_name.clone());
    for &k in &index.keys {
        out.insert(terms.triple(k));
    }
    Ok(out)
}
