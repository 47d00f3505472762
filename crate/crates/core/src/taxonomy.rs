//! Reachability over the subclass digraph.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use crate::rdf::{Iri, OntologyGraph};

/// Strongly connected components of size ≥ 2, plus single nodes with a self-loop.
/// Members are sorted; components are ordered by their smallest member.
pub fn cyclic_components(nodes: &BTreeSet<Iri>, edges: &BTreeSet<(Iri, Iri)>) -> Vec<Vec<Iri>> {
    let index_of: HashMap<&Iri, usize> = nodes.iter().enumerate().map(|(i, n)| (n, i)).collect();
    let names: Vec<&Iri> = nodes.iter().collect();
    let n = names.len();
    let mut adj = vec![Vec::new(); n];
    let mut self_loop = vec![false; n];
    for (a, b) in edges {
        let (Some(&ia), Some(&ib)) = (index_of.get(a), index_of.get(b)) else { continue };
        if ia == ib {
            self_loop[ia] = true;
        }
        adj[ia].push(ib);
    }

    // iterative Tarjan
    const UNVISITED: usize = usize::MAX;
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut next = 0;
    let mut out = Vec::new();
    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&(v, child)) = call.last() {
            if child < adj[v].len() {
                let w = adj[v][child];
                call.last_mut().expect("non-empty").1 += 1;
                if index[w] == UNVISITED {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    if comp.len() >= 2 || self_loop[v] {
                        let mut members: Vec<Iri> = comp.into_iter().map(|i| names[i].clone()).collect();
                        members.sort();
                        out.push(members);
                    }
                }
            }
        }
    }
    out.sort();
    out
}

pub fn is_acyclic(g: &OntologyGraph) -> bool {
    cyclic_components(g.classes(), g.subclass_edges()).is_empty()
}

/// Strict ancestors (all classes reachable through one or more subclass edges).
pub fn ancestors(g: &OntologyGraph, class: &Iri) -> BTreeSet<Iri> {
    reach(g.parent_map(), class)
}

fn reach(adj: &BTreeMap<Iri, BTreeSet<Iri>>, start: &Iri) -> BTreeSet<Iri> {
    let mut seen = BTreeSet::new();
    let mut queue: VecDeque<&Iri> = VecDeque::new();
    queue.push_back(start);
    while let Some(v) = queue.pop_front() {
        if let Some(next) = adj.get(v) {
            for w in next {
                if seen.insert(w.clone()) {
                    queue.push_back(w);
                }
            }
        }
    }
    seen
}

/// Memoized ancestor-or-self lookups for one graph.
pub struct AncestorCache<'g> {
    graph: &'g OntologyGraph,
    cache: HashMap<Iri, BTreeSet<Iri>>,
}

impl<'g> AncestorCache<'g> {
    pub fn new(graph: &'g OntologyGraph) -> Self {
        AncestorCache { graph, cache: HashMap::new() }
    }

    /// The class itself plus every strict ancestor.
    pub fn up_closure(&mut self, class: &Iri) -> &BTreeSet<Iri> {
        if !self.cache.contains_key(class) {
            let mut set = ancestors(self.graph, class);
            set.insert(class.clone());
            self.cache.insert(class.clone(), set);
        }
        &self.cache[class]
    }
}

/// Child map (inverse of the parent map).
pub fn children_map(g: &OntologyGraph) -> BTreeMap<Iri, BTreeSet<Iri>> {
    let mut out: BTreeMap<Iri, BTreeSet<Iri>> = BTreeMap::new();
    for (c, p) in g.subclass_edges() {
        out.entry(p.clone()).or_default().insert(c.clone());
    }
    out
}

/// The class plus every class below it.
pub fn descendants_or_self(children: &BTreeMap<Iri, BTreeSet<Iri>>, class: &Iri) -> BTreeSet<Iri> {
    let mut set = reach(children, class);
    set.insert(class.clone());
    set
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iri(s: &str) -> Iri {
        Iri::new(format!("x:{s}")).unwrap()
    }

    fn graph(edges: &[(&str, &str)]) -> (BTreeSet<Iri>, BTreeSet<(Iri, Iri)>) {
        let e: BTreeSet<_> = edges.iter().map(|(a, b)| (iri(a), iri(b))).collect();
        let n = e.iter().flat_map(|(a, b)| [a.clone(), b.clone()]).collect();
        (n, e)
    }

    #[test]
    fn two_cycle() {
        let (n, e) = graph(&[("A", "B"), ("B", "A")]);
        assert_eq!(cyclic_components(&n, &e), vec![vec![iri("A"), iri("B")]]);
    }

    #[test]
    fn chain_is_acyclic() {
        let (n, e) = graph(&[("A", "B"), ("B", "C")]);
        assert!(cyclic_components(&n, &e).is_empty());
    }

    #[test]
    fn self_loop_and_separate_cycles() {
        let (n, e) = graph(&[("A", "A"), ("B", "C"), ("C", "D"), ("D", "B"), ("D", "E")]);
        let comps = cyclic_components(&n, &e);
        assert_eq!(comps, vec![vec![iri("A")], vec![iri("B"), iri("C"), iri("D")]]);
    }
}
