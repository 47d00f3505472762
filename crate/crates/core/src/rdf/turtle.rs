//! A Turtle subset: `@prefix`/`PREFIX` declarations, prefixed names, the `a`
//! keyword, `;` and `,` abbreviations, and plain, language-tagged or
//! datatyped string literals. Blank nodes, collections, `@base`, numeric and
//! boolean shorthands and long strings are rejected with the construct named.

use std::collections::HashMap;

use super::lexer::{Cursor, LexError};
use super::ntriples::SyntaxError;
use super::term::{Iri, Literal, Term, Triple, TripleSet};
use super::vocab::RDF_TYPE;

pub fn parse_turtle_subset(text: &str) -> Result<TripleSet, SyntaxError> {
    let mut p = TurtleParser { cur: Cursor::new(text), prefixes: HashMap::new(), out: TripleSet::default() };
    match p.document() {
        Ok(()) => Ok(p.out),
        Err(e) => Err(SyntaxError::from_lex(&p.cur, e)),
    }
}

struct TurtleParser {
    cur: Cursor,
    prefixes: HashMap<String, String>,
    out: TripleSet,
}

fn unsupported<T>(cur: &Cursor, construct: &str) -> Result<T, LexError> {
    cur.err(format!("unsupported construct: {construct}"))
}

impl TurtleParser {
    fn ws(&mut self) {
        self.cur.skip_ws(true);
    }

    fn document(&mut self) -> Result<(), LexError> {
        loop {
            self.ws();
            if self.cur.at_end() {
                return Ok(());
            }
            if self.cur.starts_with("@prefix") {
                self.cur.advance(7);
                self.prefix_decl(true)?;
            } else if self.cur.starts_with_keyword("PREFIX") {
                self.cur.advance(6);
                self.prefix_decl(false)?;
            } else if self.cur.starts_with("@base") || self.cur.starts_with_keyword("BASE") {
                return unsupported(&self.cur, "base declaration");
            } else {
                self.triples()?;
                self.ws();
                if !self.cur.eat('.') {
                    return self.cur.err("expected '.' after triples");
                }
            }
        }
    }

    fn prefix_decl(&mut self, dotted: bool) -> Result<(), LexError> {
        self.ws();
        let (prefix, local) = self.cur.read_pname()?;
        if !local.is_empty() {
            return self.cur.err("prefix name must end with ':'");
        }
        self.ws();
        let ns = self.cur.read_iriref()?;
        if dotted {
            self.ws();
            if !self.cur.eat('.') {
                return self.cur.err("expected '.' after @prefix declaration");
            }
        }
        self.prefixes.insert(prefix, ns);
        Ok(())
    }

    fn triples(&mut self) -> Result<(), LexError> {
        let subject = match self.cur.peek() {
            Some('[') => return unsupported(&self.cur, "blank-node property list"),
            _ => self.iri()?,
        };
        loop {
            self.ws();
            let predicate = self.verb()?;
            loop {
                self.ws();
                let object = self.object()?;
                self.out.insert(Triple { subject: subject.clone(), predicate: predicate.clone(), object });
                self.ws();
                if !self.cur.eat(',') {
                    break;
                }
            }
            self.ws();
            if !self.cur.eat(';') {
                return Ok(());
            }
            // repeated or trailing semicolons
            loop {
                self.ws();
                if !self.cur.eat(';') {
                    break;
                }
            }
            self.ws();
            if matches!(self.cur.peek(), Some('.') | None) {
                return Ok(());
            }
        }
    }

    fn verb(&mut self) -> Result<Iri, LexError> {
        if self.cur.peek() == Some('a') && !self.cur.peek_at(1).is_some_and(|c| c.is_alphanumeric() || matches!(c, '_' | '-' | '.' | ':')) {
            self.cur.advance(1);
            return Ok(Iri::new(RDF_TYPE).expect("constant IRI"));
        }
        self.iri()
    }

    fn object(&mut self) -> Result<Term, LexError> {
        match self.cur.peek() {
            Some('"') => {
                if self.cur.starts_with("\"\"\"") {
                    return unsupported(&self.cur, "long string literal");
                }
                let lex = self.cur.read_string()?;
                if self.cur.starts_with("^^") {
                    self.cur.advance(2);
                    let dt = self.iri()?;
                    return Ok(Term::Literal(Literal::typed(lex, dt)));
                }
                Ok(Term::Literal(self.cur.read_literal_suffix(lex)?))
            }
            Some('\'') => unsupported(&self.cur, "single-quoted literal"),
            Some(c) if c.is_ascii_digit() || c == '+' || c == '-' => unsupported(&self.cur, "numeric literal"),
            _ if self.cur.starts_with_keyword("true") || self.cur.starts_with_keyword("false") => {
                unsupported(&self.cur, "boolean literal")
            }
            _ => Ok(Term::Iri(self.iri()?)),
        }
    }

    fn iri(&mut self) -> Result<Iri, LexError> {
        match self.cur.peek() {
            Some('<') => self.cur.read_iri(),
            Some('[') => unsupported(&self.cur, "blank-node property list"),
            Some('(') => unsupported(&self.cur, "collection"),
            Some('_') if self.cur.peek_at(1) == Some(':') => unsupported(&self.cur, "blank node"),
            Some(c) if c.is_alphanumeric() || c == ':' || c == '_' => {
                let start = self.cur.pos();
                let (prefix, local) = self.cur.read_pname()?;
                let Some(ns) = self.prefixes.get(&prefix) else {
                    return self.cur.err_at(start, format!("undefined prefix '{prefix}:'"));
                };
                Iri::new(format!("{ns}{local}")).or_else(|e| self.cur.err_at(start, e.to_string()))
            }
            Some(c) => self.cur.err(format!("unexpected character {c:?}")),
            None => self.cur.err("unexpected end of input"),
        }
    }
}
