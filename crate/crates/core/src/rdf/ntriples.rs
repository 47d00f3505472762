use thiserror::Error;

use super::lexer::{Cursor, LexError};
use super::term::{Term, Triple, TripleSet};

/// Parse failure with a 1-based position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at line {line}, column {column}: {reason}")]
pub struct SyntaxError {
    pub line: usize,
    pub column: usize,
    pub reason: String,
}

impl SyntaxError {
    pub(crate) fn from_lex(cur: &Cursor, e: LexError) -> Self {
        let (line, column) = cur.line_col(e.pos);
        SyntaxError { line, column, reason: e.reason }
    }
}

/// Parses N-Triples text. Blank node labels are kept verbatim (`_:label`).
pub fn parse_ntriples(text: &str) -> Result<TripleSet, SyntaxError> {
    let mut out = TripleSet::default();
    for (idx, raw) in text.split('\n').enumerate() {
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        let mut cur = Cursor::new(line);
        let parsed = parse_statement(&mut cur).map_err(|e| {
            let column = cur.line_col(e.pos).1;
            SyntaxError { line: idx + 1, column, reason: e.reason }
        })?;
        if let Some(t) = parsed {
            out.insert(t);
        }
    }
    Ok(out)
}

fn parse_statement(cur: &mut Cursor) -> Result<Option<Triple>, LexError> {
    cur.skip_ws(false);
    if cur.at_end() {
        return Ok(None);
    }
    let subject = match cur.read_nt_term()? {
        Term::Iri(i) => i,
        Term::Literal(_) => return cur.err("literal in subject position"),
    };
    expect_ws(cur)?;
    if cur.peek() != Some('<') {
        return cur.err("predicate must be an IRI");
    }
    let predicate = cur.read_iri()?;
    expect_ws(cur)?;
    let object = cur.read_nt_term()?;
    cur.skip_ws(false);
    if !cur.eat('.') {
        return cur.err("expected '.' at end of statement");
    }
    cur.skip_ws(false);
    if !cur.at_end() {
        return cur.err("unexpected content after '.'");
    }
    Ok(Some(Triple { subject, predicate, object }))
}

fn expect_ws(cur: &mut Cursor) -> Result<(), LexError> {
    let before = cur.pos();
    cur.skip_ws(false);
    if cur.pos() == before && !matches!(cur.peek(), Some('<') | Some('"') | Some('_')) {
        return cur.err("expected whitespace");
    }
    if cur.at_end() {
        return cur.err("unexpected end of statement");
    }
    Ok(())
}

/// One statement per line, sorted, LF-terminated.
pub fn serialize_ntriples(ts: &TripleSet) -> String {
    let mut lines: Vec<String> = ts.iter().map(|t| t.to_string()).collect();
    lines.sort();
    let mut out = String::with_capacity(lines.iter().map(|l| l.len() + 1).sum());
    for l in lines {
        out.push_str(&l);
        out.push('\n');
    }
    out
}
