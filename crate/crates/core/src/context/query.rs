//! Conjunctive graph-pattern queries:
//!
//! ```text
//! PREFIX ex: <http://example.org/>
//! SELECT [DISTINCT] ?v ... | * WHERE { s p o . s p o [.] }
//! ```
//!
//! Terms are variables (`?v` or `$v`), `<iri>`, prefixed names, `a`, and
//! string literals with optional language tag or datatype.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::pattern::{solve, valid_var_name, Bindings, PatternTerm, TripleIndex, TriplePattern};
use super::ContextError;
use crate::rdf::lexer::{Cursor, LexError};
use crate::rdf::vocab::RDF_TYPE;
use crate::rdf::{Iri, Literal, OntologyGraph, Term};

const UNSUPPORTED: [&str; 18] = [
    "OPTIONAL", "FILTER", "UNION", "MINUS", "BIND", "VALUES", "GRAPH", "SERVICE", "ORDER", "LIMIT", "OFFSET", "GROUP",
    "HAVING", "CONSTRUCT", "ASK", "DESCRIBE", "BASE", "FROM",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphPatternQuery {
    pub patterns: Vec<TriplePattern>,
    pub projected_variables: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub prefixes: BTreeMap<String, String>,
}

impl GraphPatternQuery {
    pub fn new(patterns: Vec<TriplePattern>, projected_variables: Vec<String>) -> Result<Self, ContextError> {
        if patterns.is_empty() {
            return Err(ContextError::QuerySyntax { line: 1, column: 1, reason: "query has no patterns".into() });
        }
        let used: BTreeSet<&str> = patterns.iter().flat_map(TriplePattern::variables).collect();
        if let Some(v) = projected_variables.iter().find(|v| !used.contains(v.as_str())) {
            return Err(ContextError::UnboundProjection(v.clone()));
        }
        Ok(GraphPatternQuery { patterns, projected_variables, prefixes: BTreeMap::new() })
    }

    /// Expands `prefix:local` using the query's declarations; other tokens as in rule files.
    pub fn resolve_token(&self, token: &str) -> Result<Term, ContextError> {
        let token = token.trim();
        if let Some((prefix, local)) = token.split_once(':') {
            if let Some(ns) = self.prefixes.get(prefix) {
                if !token.starts_with('<') && !token.starts_with('"') && !token.starts_with("_:") {
                    return Iri::new(format!("{ns}{local}"))
                        .map(Term::Iri)
                        .map_err(|e| ContextError::BadBinding(format!("{token}: {e}")));
                }
            }
        }
        super::pattern::parse_term_token(token).map_err(|e| ContextError::BadBinding(format!("{token}: {e}")))
    }
}

struct QueryParser {
    cur: Cursor,
    prefixes: HashMap<String, String>,
}

pub fn parse_query(text: &str) -> Result<GraphPatternQuery, ContextError> {
    let mut p = QueryParser { cur: Cursor::new(text), prefixes: HashMap::new() };
    let parsed = p.query();
    let (patterns, projection, star) = parsed.map_err(|e| {
        let (line, column) = p.cur.line_col(e.pos);
        ContextError::QuerySyntax { line, column, reason: e.reason }
    })?;
    let projection = if star {
        let mut seen = BTreeSet::new();
        patterns.iter().flat_map(TriplePattern::variables).filter(|v| seen.insert(*v)).map(str::to_string).collect()
    } else {
        projection
    };
    let mut q = GraphPatternQuery::new(patterns, projection)?;
    q.prefixes = p.prefixes.into_iter().collect();
    Ok(q)
}

impl QueryParser {
    fn ws(&mut self) {
        self.cur.skip_ws(true);
    }

    fn reject_unsupported(&self) -> Result<(), LexError> {
        for kw in UNSUPPORTED {
            if self.cur.starts_with_keyword(kw) {
                return self.cur.err(format!("unsupported construct: {kw}"));
            }
        }
        Ok(())
    }

    fn query(&mut self) -> Result<(Vec<TriplePattern>, Vec<String>, bool), LexError> {
        loop {
            self.ws();
            if !self.cur.starts_with_keyword("PREFIX") {
                break;
            }
            self.cur.advance(6);
            self.ws();
            let (prefix, local) = self.cur.read_pname()?;
            if !local.is_empty() {
                return self.cur.err("prefix name must end with ':'");
            }
            self.ws();
            let ns = self.cur.read_iriref()?;
            self.prefixes.insert(prefix, ns);
        }
        self.reject_unsupported()?;
        if !self.cur.starts_with_keyword("SELECT") {
            return self.cur.err("expected SELECT");
        }
        self.cur.advance(6);
        self.ws();
        if self.cur.starts_with_keyword("DISTINCT") {
            self.cur.advance(8);
        } else if self.cur.starts_with_keyword("REDUCED") {
            self.cur.advance(7);
        }
        self.ws();
        let mut vars = Vec::new();
        let mut star = false;
        if self.cur.eat('*') {
            star = true;
        } else {
            while matches!(self.cur.peek(), Some('?' | '$')) {
                let v = self.var()?;
                if !vars.contains(&v) {
                    vars.push(v);
                }
                self.ws();
            }
            if self.cur.peek() == Some('(') {
                return self.cur.err("unsupported construct: projection expression");
            }
            if vars.is_empty() {
                return self.cur.err("expected projected variables or '*'");
            }
        }
        self.ws();
        self.reject_unsupported()?;
        if self.cur.starts_with_keyword("WHERE") {
            self.cur.advance(5);
            self.ws();
        }
        if !self.cur.eat('{') {
            return self.cur.err("expected '{'");
        }
        let mut patterns = Vec::new();
        loop {
            self.ws();
            self.reject_unsupported()?;
            match self.cur.peek() {
                Some('}') => {
                    self.cur.bump();
                    break;
                }
                Some('{') => return self.cur.err("unsupported construct: nested group"),
                None => return self.cur.err("expected '}'"),
                _ => {}
            }
            let s = self.term(false)?;
            self.ws();
            let p = self.term(true)?;
            self.ws();
            if matches!(self.cur.peek(), Some('/' | '|' | '*' | '+')) {
                return self.cur.err("unsupported construct: property path");
            }
            let o = self.term(false)?;
            patterns.push(TriplePattern::new(s, p, o));
            self.ws();
            self.reject_unsupported()?;
            match self.cur.peek() {
                Some('.') => {
                    self.cur.bump();
                }
                Some('}') => {}
                Some(';' | ',') => return self.cur.err("unsupported construct: ';' or ',' abbreviation"),
                _ => return self.cur.err("expected '.' or '}'"),
            }
        }
        self.ws();
        if !self.cur.at_end() {
            self.reject_unsupported()?;
            return self.cur.err("unexpected text after query");
        }
        Ok((patterns, vars, star))
    }

    fn var(&mut self) -> Result<String, LexError> {
        let start = self.cur.pos();
        self.cur.bump();
        let mut name = String::new();
        while let Some(c) = self.cur.peek().filter(|c| c.is_alphanumeric() || *c == '_') {
            name.push(c);
            self.cur.bump();
        }
        if !valid_var_name(&name) {
            return self.cur.err_at(start, "empty variable name");
        }
        Ok(name)
    }

    fn term(&mut self, predicate: bool) -> Result<PatternTerm, LexError> {
        self.reject_unsupported()?;
        let start = self.cur.pos();
        match self.cur.peek() {
            Some('?' | '$') => Ok(PatternTerm::Var(self.var()?)),
            Some('<') => Ok(PatternTerm::Const(Term::Iri(self.cur.read_iri()?))),
            Some('"') if !predicate => {
                let lex = self.cur.read_string()?;
                if self.cur.starts_with("^^") {
                    self.cur.advance(2);
                    let dt = match self.term(true)? {
                        PatternTerm::Const(Term::Iri(i)) => i,
                        _ => return self.cur.err_at(start, "datatype must be an IRI"),
                    };
                    return Ok(PatternTerm::Const(Term::Literal(Literal::typed(lex, dt))));
                }
                Ok(PatternTerm::Const(Term::Literal(self.cur.read_literal_suffix(lex)?)))
            }
            Some('\'') => self.cur.err("unsupported construct: single-quoted literal"),
            Some('_') if self.cur.peek_at(1) == Some(':') => self.cur.err("unsupported construct: blank node"),
            Some('[') => self.cur.err("unsupported construct: blank node"),
            Some('(') => self.cur.err("unsupported construct: collection"),
            Some('^') if predicate => self.cur.err("unsupported construct: property path"),
            Some('a') if predicate && !self.cur.peek_at(1).is_some_and(|c| c.is_alphanumeric() || matches!(c, '_' | '-' | '.' | ':')) => {
                self.cur.bump();
                Ok(PatternTerm::Const(Term::Iri(Iri::new(RDF_TYPE).expect("constant IRI"))))
            }
            Some(c) if c.is_ascii_digit() || ((c == '+' || c == '-') && !predicate) => {
                self.cur.err("unsupported construct: numeric literal")
            }
            Some(c) if c.is_alphanumeric() || c == ':' || c == '_' => {
                if self.cur.starts_with_keyword("true") || self.cur.starts_with_keyword("false") {
                    return self.cur.err("unsupported construct: boolean literal");
                }
                let (prefix, local) = self.cur.read_pname()?;
                let Some(ns) = self.prefixes.get(&prefix) else {
                    return self.cur.err_at(start, format!("undefined prefix '{prefix}:'"));
                };
                Iri::new(format!("{ns}{local}"))
                    .map(|i| PatternTerm::Const(Term::Iri(i)))
                    .or_else(|e| self.cur.err_at(start, e.to_string()))
            }
            Some(c) => self.cur.err(format!("unexpected character {c:?}")),
            None => self.cur.err("unexpected end of input"),
        }
    }
}

pub type ResultRows = BTreeSet<Bindings>;

pub fn evaluate_query(g: &OntologyGraph, q: &GraphPatternQuery) -> ResultRows {
    evaluate_on(&TripleIndex::new(g.triples().iter()), q)
}

/// Projected, de-duplicated solutions.
pub fn evaluate_on(index: &TripleIndex, q: &GraphPatternQuery) -> ResultRows {
    solve(index, &q.patterns, vec![Bindings::new()])
        .into_iter()
        .map(|row| {
            q.projected_variables
                .iter()
                .map(|v| (v.clone(), row.get(v).cloned().expect("projection checked at construction")))
                .collect()
        })
        .collect()
}
